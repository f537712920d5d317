//! Report records and their two renderings: line-oriented `key=value` text
//! and a JSON document. Fractions are always written exactly (`9/2`).

use std::fmt::Write as _;

use kcover_core::graph::EdgeSet;
use kcover_core::structures::EdgeStructure;
use serde::Serialize;

pub fn edge_list(s: &EdgeSet) -> Vec<String> {
    s.iter().map(|e| format!("{}-{}", e.u(), e.v())).collect()
}

pub fn structure_list(cliques: &[EdgeStructure]) -> Vec<String> {
    cliques.iter().map(|c| c.canonical_key().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")).collect()
}

#[derive(Debug, Serialize)]
pub struct ImprovedDetail {
    pub rounded: Vec<String>,
    pub residual: Vec<String>,
    pub bipartized: Vec<String>,
    pub residual_weight: u64,
    pub cut_weight: u64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub input: String,
    pub algorithm: String,
    pub kind: String,
    pub k: usize,
    pub cover: Vec<String>,
    pub cover_weight: u64,
    pub lp_objective: String,
    pub ratio_bound: String,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improved: Option<ImprovedDetail>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Debug, Serialize)]
pub struct ExactReport {
    pub input: String,
    pub kind: String,
    pub k: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct PackReport {
    pub input: String,
    pub k: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cliques: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perfect: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub input: String,
    pub cover_file: String,
    pub kind: String,
    pub k: usize,
    pub cover_size: usize,
    pub cover_weight: u64,
    pub feasible: bool,
}

#[derive(Debug, Serialize)]
pub struct StudyRow {
    pub n: usize,
    pub tau: Option<u64>,
    pub nu: Option<usize>,
    pub tau_over_nu: String,
    pub tau_over_edges: String,
}

#[derive(Debug, Serialize)]
pub struct StudyReport {
    pub kind: String,
    pub k: usize,
    pub rows: Vec<StudyRow>,
}

fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

fn joined(items: &[String]) -> String {
    items.join(" ")
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "input", &self.input);
        line(&mut out, "algorithm", &self.algorithm);
        line(&mut out, "kind", &self.kind);
        line(&mut out, "k", self.k);
        line(&mut out, "cover", joined(&self.cover));
        line(&mut out, "cover_size", self.cover.len());
        line(&mut out, "cover_weight", self.cover_weight);
        line(&mut out, "lp_objective", &self.lp_objective);
        line(&mut out, "ratio_bound", &self.ratio_bound);
        if let Some(d) = &self.improved {
            line(&mut out, "rounded", joined(&d.rounded));
            line(&mut out, "residual", joined(&d.residual));
            line(&mut out, "bipartized", joined(&d.bipartized));
            line(&mut out, "residual_weight", d.residual_weight);
            line(&mut out, "cut_weight", d.cut_weight);
        }
        line(&mut out, "certified", self.certified);
        if let Some(ms) = self.wall_time_ms {
            line(&mut out, "wall_time_ms", ms);
        }
        out
    }
}

impl ExactReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "input", &self.input);
        line(&mut out, "kind", &self.kind);
        line(&mut out, "k", self.k);
        line(&mut out, "status", &self.status);
        if let Some(w) = self.weight {
            line(&mut out, "weight", w);
        }
        if let Some(c) = &self.cover {
            line(&mut out, "cover", joined(c));
        }
        if let Some(lp) = &self.lp_bound {
            line(&mut out, "lp_bound", lp);
        }
        if let Some(n) = self.nodes {
            line(&mut out, "nodes", n);
        }
        out
    }
}

impl PackReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "input", &self.input);
        line(&mut out, "k", self.k);
        line(&mut out, "status", &self.status);
        if let Some(c) = self.count {
            line(&mut out, "count", c);
        }
        if let Some(c) = &self.cliques {
            line(&mut out, "cliques", joined(c));
        }
        if let Some(p) = self.perfect {
            line(&mut out, "perfect", p);
        }
        if let Some(n) = self.nodes {
            line(&mut out, "nodes", n);
        }
        out
    }
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "input", &self.input);
        line(&mut out, "cover_file", &self.cover_file);
        line(&mut out, "kind", &self.kind);
        line(&mut out, "k", self.k);
        line(&mut out, "cover_size", self.cover_size);
        line(&mut out, "cover_weight", self.cover_weight);
        line(&mut out, "feasible", self.feasible);
        out
    }
}

impl StudyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "kind", &self.kind);
        line(&mut out, "k", self.k);
        out.push_str("n tau nu tau/nu tau/C(n,2)\n");
        let opt = |v: Option<String>| v.unwrap_or_else(|| "unsolved".into());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                r.n,
                opt(r.tau.map(|t| t.to_string())),
                opt(r.nu.map(|v| v.to_string())),
                r.tau_over_nu,
                r.tau_over_edges
            );
        }
        out
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
