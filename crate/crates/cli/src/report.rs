use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use greechie::bounds::{check_bounds, BoundReport, BoundValue};
use greechie::measures::{
    analyze_group_measures, build_incidence_system, find_probability_measure,
    nonconstant_range_profile, square_system_determinant, verify_group_measure,
};
use greechie::{Classification, Hypergraph};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub input: String,
    pub n: usize,
    pub m: usize,
    pub classification: Classification,
    pub square: bool,
    pub determinant: Option<String>,
    pub invariant_factors: FactorSummary,
    pub state: StateVerdict,
    pub group_measure: GroupVerdict,
    pub range_profile: Option<BTreeMap<u64, bool>>,
    pub bounds: Vec<BoundReport>,
}

#[derive(Debug, Serialize)]
pub struct FactorSummary {
    pub rank: usize,
    pub unknowns: usize,
    pub unit_count: usize,
    /// Invariant factors other than 1, in divisibility order.
    pub non_unit: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct StateVerdict {
    pub exists: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct GroupVerdict {
    pub exists: bool,
    pub modulus: Option<u64>,
    pub values: Option<Vec<u64>>,
    pub g: Option<u64>,
    pub verified: Option<bool>,
}

impl AnalysisReport {
    pub fn build(input: &str, h: &Hypergraph, primes: Option<&[u64]>) -> Result<Self> {
        let classification = h.classify();
        let square = build_incidence_system(h).is_square();
        let determinant = if square {
            Some(square_system_determinant(h)?.to_string())
        } else {
            None
        };
        let analysis = analyze_group_measures(h)?;
        let non_unit: Vec<String> = analysis
            .snf
            .invariant_factors
            .iter()
            .map(ToString::to_string)
            .filter(|d| d != "1")
            .collect();
        let invariant_factors = FactorSummary {
            rank: analysis.snf.rank,
            unknowns: analysis.unknowns,
            unit_count: analysis.snf.invariant_factors.len() - non_unit.len(),
            non_unit,
        };
        let state = find_probability_measure(h);
        let group_measure = match &analysis.witness {
            Some(w) => GroupVerdict {
                exists: true,
                modulus: Some(w.p),
                values: Some(w.values.clone()),
                g: Some(w.g),
                verified: Some(verify_group_measure(h, w)?),
            },
            None => GroupVerdict {
                exists: false,
                modulus: None,
                values: None,
                g: None,
                verified: None,
            },
        };
        let range_profile = primes
            .map(|p| nonconstant_range_profile(h, p))
            .transpose()?;
        let bounds = check_bounds(h).unwrap_or_default();
        Ok(Self {
            input: input.to_string(),
            n: h.vertex_count(),
            m: h.edge_count(),
            classification,
            square,
            determinant,
            invariant_factors,
            state: StateVerdict {
                exists: state.is_some(),
                witness: state.map(|s| s.to_strings()),
            },
            group_measure,
            range_profile,
            bounds,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.classification;
        let _ = writeln!(s, "input: {}", self.input);
        let _ = writeln!(s, "vertices: {}  edges: {}", self.n, self.m);
        let order = c
            .min_cycle_order
            .map_or_else(|| "none (acyclic)".to_string(), |k| k.to_string());
        let _ = writeln!(s, "class: {}  min cycle order: {order}", c.kind);
        for v in &c.violations {
            let _ = writeln!(s, "  violation: {v}");
        }
        match &self.determinant {
            Some(d) => {
                let _ = writeln!(s, "system: square, determinant {d}");
            }
            None => {
                let _ = writeln!(s, "system: {} x {}, not square", self.m, self.n + 1);
            }
        }
        let f = &self.invariant_factors;
        let _ = writeln!(
            s,
            "invariant factors: rank {} of {} unknowns, {} unit, non-unit [{}]",
            f.rank,
            f.unknowns,
            f.unit_count,
            f.non_unit.join(", ")
        );
        match &self.state.witness {
            Some(w) => {
                let _ = writeln!(s, "state: yes  [{}]", w.join(" "));
            }
            None => {
                let _ = writeln!(s, "state: none");
            }
        }
        let g = &self.group_measure;
        match (g.modulus, &g.values, g.g) {
            (Some(p), Some(values), Some(sum)) => {
                let vals: Vec<String> = values.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    s,
                    "group measure: yes, into Z_{p}, edge sum {sum}  [{}]",
                    vals.join(" ")
                );
            }
            _ => {
                let _ = writeln!(s, "group measure: none");
            }
        }
        if let Some(profile) = &self.range_profile {
            let parts: Vec<String> = profile
                .iter()
                .map(|(p, b)| format!("{p}:{}", if *b { "yes" } else { "no" }))
                .collect();
            let _ = writeln!(s, "nonconstant measures by prime: {}", parts.join(" "));
        }
        for b in &self.bounds {
            let bound = match b.bound_value {
                BoundValue::Edges(e) => format!("m <= {e}"),
                BoundValue::Predicate => "(12m - n)^2 <= 4n^3 - 3n^2".to_string(),
            };
            let verdict = if !b.applies() {
                format!("not applicable ({})", b.applicability_note)
            } else if b.satisfied {
                "satisfied".to_string()
            } else {
                "VIOLATED".to_string()
            };
            let _ = writeln!(s, "bound {}: {bound}: {verdict}", b.class);
        }
        s
    }
}
