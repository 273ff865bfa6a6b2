use std::io::Write;
use std::time::Duration;

use anyhow::Result;
use greechie::enumerate::{
    enumerate_diagrams, state_verdicts, Budget, EnumerationOptions, EnumerationTask,
};
use greechie::{serialize_diagram, DiagramKind};
use serde::Serialize;

pub struct CatalogArgs {
    pub max_vertices: usize,
    pub class: DiagramKind,
    pub max_edges: Option<usize>,
    pub min_edge_size: usize,
    pub max_edge_size: Option<usize>,
    pub jsonl: bool,
    pub budget: Option<Duration>,
    pub workers: usize,
    pub states: bool,
}

#[derive(Serialize)]
struct Record<'a> {
    n: usize,
    m: usize,
    class: DiagramKind,
    state: Option<bool>,
    edges: &'a [Vec<usize>],
}

pub fn run(args: &CatalogArgs, out: &mut impl Write) -> Result<()> {
    let task = EnumerationTask {
        max_vertices: args.max_vertices,
        class_filter: args.class,
        min_edge_size: args.min_edge_size,
        max_edge_size: args.max_edge_size,
        connected_only: true,
        max_edges: args.max_edges,
    };
    let options = EnumerationOptions {
        workers: args.workers,
        budget: Budget {
            max_nodes: None,
            max_time: args.budget,
        },
    };
    let en = enumerate_diagrams(&task, &options)?;
    let verdicts: Vec<Option<bool>> = if args.states {
        state_verdicts(&en.diagrams, args.workers)
            .into_iter()
            .map(Some)
            .collect()
    } else {
        vec![None; en.diagrams.len()]
    };

    for (h, state) in en.diagrams.iter().zip(&verdicts) {
        let class = h.classify().kind;
        if args.jsonl {
            let rec = Record {
                n: h.vertex_count(),
                m: h.edge_count(),
                class,
                state: *state,
                edges: h.edges(),
            };
            writeln!(out, "{}", serde_json::to_string(&rec)?)?;
        } else {
            let state = match state {
                Some(true) => "yes",
                Some(false) => "no",
                None => "unchecked",
            };
            writeln!(
                out,
                "# n={} m={} class={class} state={state}",
                h.vertex_count(),
                h.edge_count()
            )?;
            writeln!(out, "{}", serialize_diagram(h))?;
        }
    }

    let stateless = verdicts.iter().filter(|v| **v == Some(false)).count();
    let summary = format!(
        "{} diagram(s), {} without a state{}",
        en.diagrams.len(),
        stateless,
        if en.complete {
            String::new()
        } else {
            "; INCOMPLETE: budget exhausted".to_string()
        }
    );
    if args.jsonl {
        eprintln!("{summary}");
    } else {
        writeln!(out, "# {summary}")?;
    }
    Ok(())
}
