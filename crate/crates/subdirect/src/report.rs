//! Reproducible JSON reports for the CLI commands.
//!
//! Re-running a command with identical flags and seed produces byte-identical
//! JSON except for the `elapsed_ms` field: configs echo every cap and seed,
//! maps are ordered, and the PRNG is pinned (see [`crate::rng`]).

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{
    build_standard_action, check_base_group_containment, check_structural_quasiprimitivity,
    embed_compound, search_invariant_cartesian_decompositions, ContainmentReport, DiagonalType,
    EquivarianceReport, QuasiprimitivityReport, WitnessFile, DEFAULT_POINT_CAP,
};
use crate::error::{Error, Result};
use crate::factorisation::{
    g6_joint_uniform_search, nostripfact_search, SearchMode, DEFAULT_SEARCH_BUDGET,
};
use crate::group::{FiniteGroup, GroupSpec, DEFAULT_ORDER_CAP};
use crate::morphism::{enumerate_automorphisms, fixed_points, uniformity};
use crate::rng::ALGORITHM;
use crate::strips::StripProductJson;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope for every CLI command: the command name, a config echo (caps and
/// seeds included), free-form notes, the command result, and wall time.
#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub command: String,
    pub version: &'static str,
    pub config: Value,
    pub notes: Vec<String>,
    pub result: T,
    pub elapsed_ms: u128,
}

impl<T: Serialize> RunReport<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn build_group(spec: &GroupSpec, cap: usize) -> Result<Arc<FiniteGroup>> {
    spec.build_with_cap(cap)
}

#[derive(Debug, Serialize)]
pub struct UniformAutomorphismEntry {
    pub index: usize,
    pub image: Vec<u32>,
}

#[derive(Debug, Serialize)]
pub struct UniformResult {
    pub group: String,
    pub order: usize,
    pub solvable: bool,
    pub automorphism_count: usize,
    pub uniform_count: usize,
    pub uniform_automorphisms: Vec<UniformAutomorphismEntry>,
    /// For every automorphism: uniform iff its only fixed point is the
    /// identity, checked by both routes.
    pub uniform_iff_fixed_point_free: bool,
}

pub fn cmd_uniform(spec: &GroupSpec, cap: usize) -> Result<RunReport<UniformResult>> {
    let start = Instant::now();
    let group = build_group(spec, cap)?;
    let autos = enumerate_automorphisms(&group);
    let mut uniform_automorphisms = Vec::new();
    let mut equivalent = true;
    for (index, a) in autos.iter().enumerate() {
        let report = uniformity(a);
        let fpf = fixed_points(a) == vec![0];
        equivalent &= report.uniform == fpf;
        if report.uniform {
            uniform_automorphisms.push(UniformAutomorphismEntry {
                index,
                image: a.map().to_vec(),
            });
        }
    }
    let solvable = group.is_solvable();
    let mut notes = Vec::new();
    if !solvable {
        notes.push(format!(
            "{} is non-solvable, so no automorphism can be uniform",
            group.name()
        ));
    }
    let result = UniformResult {
        group: group.name().to_string(),
        order: group.order(),
        solvable,
        automorphism_count: autos.len(),
        uniform_count: uniform_automorphisms.len(),
        uniform_automorphisms,
        uniform_iff_fixed_point_free: equivalent,
    };
    Ok(RunReport {
        command: "uniform".into(),
        version: ARTIFACT_VERSION,
        config: json!({ "group": spec.to_string(), "order_cap": cap }),
        notes,
        result,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Serialize)]
pub struct StripfactResult {
    pub claimed_theorem: &'static str,
    pub group: String,
    pub k: usize,
    pub mode: &'static str,
    pub hypothesis_holds: bool,
    pub candidates_checked: u128,
    pub verdicts_evaluated: u128,
    pub factorisations_found: u128,
    pub diagnoses: BTreeMap<String, u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_witness: Option<(StripProductJson, StripProductJson)>,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<&'static str>,
}

pub fn cmd_stripfact(
    spec: &GroupSpec,
    k: usize,
    mode: SearchMode,
    cap: usize,
    budget: u128,
) -> Result<RunReport<StripfactResult>> {
    let start = Instant::now();
    let group = build_group(spec, cap)?;
    let seed = match mode {
        SearchMode::Sampled { seed, .. } => Some(seed),
        SearchMode::Exhaustive => None,
    };
    let n = match mode {
        SearchMode::Sampled { n, .. } => Some(n),
        SearchMode::Exhaustive => None,
    };
    let report = nostripfact_search(&group, k, mode, budget)?;
    let mut notes = Vec::new();
    if !report.hypothesis_holds {
        notes.push(format!(
            "{} admits a uniform automorphism: the no-factorisation hypothesis is violated, so factorisations may (and do) exist",
            group.name()
        ));
    }
    let diagnoses: BTreeMap<String, u128> = report
        .diagnoses
        .iter()
        .map(|(class, count)| {
            let key = serde_json::to_value(class)
                .expect("classes serialize")
                .as_str()
                .unwrap()
                .to_string();
            (key, *count)
        })
        .collect();
    let result = StripfactResult {
        claimed_theorem:
            "products of pairwise disjoint non-trivial full strips never cover T^k when T has no uniform automorphism",
        group: group.name().to_string(),
        k,
        mode: match report.mode {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Sampled { .. } => "sampled",
        },
        hypothesis_holds: report.hypothesis_holds,
        candidates_checked: report.candidates_checked,
        verdicts_evaluated: report.verdicts_evaluated,
        factorisations_found: report.factorisations_found,
        diagnoses,
        first_witness: report.first_witness,
        seed,
        rng_algorithm: report.rng_algorithm,
    };
    Ok(RunReport {
        command: "stripfact".into(),
        version: ARTIFACT_VERSION,
        config: json!({
            "group": spec.to_string(),
            "k": k,
            "mode": result.mode,
            "n": n,
            "seed": seed,
            "order_cap": cap,
            "budget": budget,
            "rng": seed.map(|_| ALGORITHM),
        }),
        notes,
        result,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Serialize)]
pub struct G6Result {
    pub group: String,
    pub group_order: usize,
    pub cardinality_certificate: bool,
    pub pairs_checked: u64,
    pub max_joint_image: usize,
    pub square_order: usize,
    pub best_pair: Option<(usize, usize)>,
    pub x_order: String,
    pub y_order: String,
    pub product_order: String,
    pub ambient_order: String,
    pub deficiency: String,
}

pub fn cmd_g6(spec: &GroupSpec, cap: usize, budget: u128) -> Result<RunReport<G6Result>> {
    let start = Instant::now();
    let group = build_group(spec, cap)?;
    let report = g6_joint_uniform_search(&group, budget)?;
    let result = G6Result {
        group: report.group.clone(),
        group_order: report.group_order,
        cardinality_certificate: report.cardinality_certificate,
        pairs_checked: report.pairs_checked,
        max_joint_image: report.max_joint_image,
        square_order: report.group_order * report.group_order,
        best_pair: report.best_pair,
        x_order: report.x_order.to_string(),
        y_order: report.y_order.to_string(),
        product_order: report.product_order.to_string(),
        ambient_order: report.ambient_order.to_string(),
        deficiency: report.deficiency.to_string(),
    };
    Ok(RunReport {
        command: "g6".into(),
        version: ARTIFACT_VERSION,
        config: json!({ "group": spec.to_string(), "order_cap": cap, "budget": budget }),
        notes: vec![
            "no finite group has a jointly surjective pair of difference maps: |GxG| > |G|"
                .to_string(),
        ],
        result,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Parses a `--strips` argument: comma-separated groups of 1-based coordinate
/// digits, e.g. `12,34`.
pub fn parse_strips(arg: &str, k: usize) -> Result<Vec<Vec<usize>>> {
    let mut supports = Vec::new();
    for part in arg.split(',') {
        let mut support = Vec::new();
        for ch in part.chars() {
            let digit = ch
                .to_digit(10)
                .ok_or_else(|| Error::InvalidInput(format!("bad strip coordinate `{ch}`")))?
                as usize;
            if digit == 0 || digit > k {
                return Err(Error::InvalidInput(format!(
                    "strip coordinate {digit} out of range 1..={k}"
                )));
            }
            support.push(digit - 1);
        }
        if support.len() < 2 {
            return Err(Error::InvalidInput(
                "each strip needs at least two coordinates".into(),
            ));
        }
        supports.push(support);
    }
    Ok(supports)
}

#[derive(Debug, Serialize)]
pub struct DiagBuildResult {
    pub group: String,
    pub k: usize,
    pub strips: Vec<Vec<usize>>,
    pub top_generators: Vec<Vec<usize>>,
    pub points: usize,
    pub diagonal_type: DiagonalType,
    pub quasiprimitivity: QuasiprimitivityReport,
    pub action_axioms_verified: bool,
}

pub fn cmd_diag_build(
    spec: &GroupSpec,
    k: usize,
    strips: &[Vec<usize>],
    cap: usize,
    point_cap: u128,
) -> Result<RunReport<DiagBuildResult>> {
    let start = Instant::now();
    let group = build_group(spec, cap)?;
    let action = build_standard_action(&group, k, strips, point_cap)?;
    let quasiprimitivity = check_structural_quasiprimitivity(&action);
    let result = DiagBuildResult {
        group: group.name().to_string(),
        k,
        strips: strips
            .iter()
            .map(|s| s.iter().map(|&c| c + 1).collect())
            .collect(),
        top_generators: action.top_gens().to_vec(),
        points: action.degree(),
        diagonal_type: action.diagonal_type(),
        quasiprimitivity,
        action_axioms_verified: action.verify_action_axioms(),
    };
    Ok(RunReport {
        command: "diag build".into(),
        version: ARTIFACT_VERSION,
        config: json!({
            "base": spec.to_string(),
            "k": k,
            "strips": strips.iter().map(|s| s.iter().map(|&c| c + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "order_cap": cap,
            "point_cap": point_cap,
        }),
        notes: Vec::new(),
        result,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Serialize)]
pub struct DiagEmbedResult {
    pub group: String,
    pub k: usize,
    pub strips: Vec<Vec<usize>>,
    pub points: usize,
    pub diagonal_type: DiagonalType,
    pub delta_size: usize,
    pub r: usize,
    pub verification: EquivarianceReport,
    pub containment: ContainmentReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<String>,
}

pub struct DiagEmbedOutput {
    pub report: RunReport<DiagEmbedResult>,
    pub witness: WitnessFile,
}

pub fn cmd_diag_embed(
    spec: &GroupSpec,
    k: usize,
    strips: &[Vec<usize>],
    cap: usize,
    point_cap: u128,
    seed: u64,
    witness_path: Option<String>,
) -> Result<DiagEmbedOutput> {
    let start = Instant::now();
    let group = build_group(spec, cap)?;
    let action = build_standard_action(&group, k, strips, point_cap)?;
    let witness = embed_compound(&action, seed)?;
    let m_gens = action.power().generating_tuples().len();
    let containment = check_base_group_containment(&witness, m_gens);
    let file = WitnessFile::from_witness(spec, &action, &witness);
    let result = DiagEmbedResult {
        group: group.name().to_string(),
        k,
        strips: strips
            .iter()
            .map(|s| s.iter().map(|&c| c + 1).collect())
            .collect(),
        points: action.degree(),
        diagonal_type: action.diagonal_type(),
        delta_size: witness.delta_size,
        r: witness.r,
        verification: witness.verification.clone(),
        containment,
        witness_path: witness_path.clone(),
    };
    let report = RunReport {
        command: "diag embed".into(),
        version: ARTIFACT_VERSION,
        config: json!({
            "base": spec.to_string(),
            "k": k,
            "strips": strips.iter().map(|s| s.iter().map(|&c| c + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "order_cap": cap,
            "point_cap": point_cap,
            "seed": seed,
            "out": witness_path,
        }),
        notes: Vec::new(),
        result,
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok(DiagEmbedOutput {
        report,
        witness: file,
    })
}

#[derive(Debug, Serialize)]
pub struct DiagNoEmbedResult {
    pub group: String,
    pub k: usize,
    pub strips: Vec<Vec<usize>>,
    pub points: usize,
    pub diagonal_type: DiagonalType,
    pub candidates_considered: usize,
    pub index_sets_checked: usize,
    pub g0_generators: Vec<crate::cartesian::PowerAutomorphismJson>,
    pub families_found: usize,
    pub families: Vec<Vec<StripProductJson>>,
}

pub fn cmd_diag_no_embed(
    spec: &GroupSpec,
    k: usize,
    strips: &[Vec<usize>],
    cap: usize,
    point_cap: u128,
) -> Result<RunReport<DiagNoEmbedResult>> {
    let start = Instant::now();
    let group = build_group(spec, cap)?;
    let action = build_standard_action(&group, k, strips, point_cap)?;
    let search = search_invariant_cartesian_decompositions(&action)?;
    let mut notes = Vec::new();
    match search.diagonal_type {
        DiagonalType::Simple => notes.push(
            "simple diagonal type: an empty list certifies that no product-action overgroup exists at this scale"
                .to_string(),
        ),
        DiagonalType::Compound => notes.push(
            "compound diagonal type: the non-empty list matches the explicit embedding"
                .to_string(),
        ),
    }
    let result = DiagNoEmbedResult {
        group: group.name().to_string(),
        k,
        strips: strips
            .iter()
            .map(|s| s.iter().map(|&c| c + 1).collect())
            .collect(),
        points: action.degree(),
        diagonal_type: search.diagonal_type,
        candidates_considered: search.candidates_considered,
        index_sets_checked: search.index_sets_checked,
        g0_generators: search.g0_generators,
        families_found: search.families.len(),
        families: search.families,
    };
    Ok(RunReport {
        command: "diag no-embed-check".into(),
        version: ARTIFACT_VERSION,
        config: json!({
            "base": spec.to_string(),
            "k": k,
            "strips": strips.iter().map(|s| s.iter().map(|&c| c + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "order_cap": cap,
            "point_cap": point_cap,
        }),
        notes,
        result,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Serialize)]
pub struct DiagVerifyResult {
    pub valid: bool,
    pub checks: u64,
    pub failures: u64,
    pub points: usize,
    pub generators: usize,
}

pub fn cmd_diag_verify_witness(
    file: &WitnessFile,
    point_cap: u128,
) -> Result<RunReport<DiagVerifyResult>> {
    let start = Instant::now();
    let report = file.verify(point_cap)?;
    let result = DiagVerifyResult {
        valid: report.failures == 0,
        checks: report.checks,
        failures: report.failures,
        points: file.bijection.len(),
        generators: file.generator_images.len(),
    };
    Ok(RunReport {
        command: "diag verify-witness".into(),
        version: ARTIFACT_VERSION,
        config: json!({
            "base": file.base.to_string(),
            "k": file.k,
            "point_cap": point_cap,
        }),
        notes: Vec::new(),
        result,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Defaults shared by the CLI.
pub fn default_caps() -> (usize, u128, u128) {
    (DEFAULT_ORDER_CAP, DEFAULT_POINT_CAP, DEFAULT_SEARCH_BUDGET)
}
