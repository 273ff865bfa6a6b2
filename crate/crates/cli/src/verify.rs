use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use greechie::audit::{run_check, AuditConfig, Stage, Status, TITLES};

use crate::{read_diagram, Failure};

pub struct VerifyArgs {
    pub skip: Vec<String>,
    pub omp21: Option<PathBuf>,
    pub oml67: Option<PathBuf>,
    pub extended: bool,
    pub samples: usize,
    pub seed: u64,
    pub json: bool,
}

fn config(args: &VerifyArgs) -> Result<AuditConfig> {
    let mut config = AuditConfig {
        extended: args.extended,
        samples: args.samples,
        seed: args.seed,
        ..AuditConfig::default()
    };
    for s in &args.skip {
        for part in s.split(',') {
            let stage: Stage = part.parse().map_err(anyhow::Error::msg)?;
            config.skip.insert(stage);
        }
    }
    if let Some(p) = &args.omp21 {
        config.omp21 = read_diagram(p).context("loading --omp21")?;
    }
    if let Some(p) = &args.oml67 {
        config.oml67 = read_diagram(p).context("loading --oml67")?;
    }
    Ok(config)
}

pub fn run(args: &VerifyArgs, out: &mut impl Write) -> Result<(), Failure> {
    let config = config(args)?;
    let mut results = Vec::new();
    for &(id, _, _) in &TITLES {
        let r = run_check(id, &config);
        if !args.json {
            writeln!(out, "{r}").map_err(anyhow::Error::from)?;
            out.flush().map_err(anyhow::Error::from)?;
        }
        results.push(r);
    }
    if args.json {
        let text = serde_json::to_string_pretty(&results).map_err(anyhow::Error::from)?;
        writeln!(out, "{text}").map_err(anyhow::Error::from)?;
    }
    let count = |s| results.iter().filter(|r| r.status == s).count();
    let (passed, failed, skipped) = (
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped),
    );
    if !args.json {
        writeln!(out, "{passed} passed, {failed} failed, {skipped} skipped")
            .map_err(anyhow::Error::from)?;
    }
    if failed > 0 {
        let ids: Vec<String> = results
            .iter()
            .filter(|r| r.status == Status::Fail)
            .map(|r| r.id.to_string())
            .collect();
        return Err(Failure::Verification(format!(
            "check(s) {} failed",
            ids.join(", ")
        )));
    }
    Ok(())
}
