//! Report shapes. Everything here is plain data so that JSON output reads
//! back into the same value.

use std::fmt::Write as _;

use nhdm_core::cpext::GenPermMatrix;
use nhdm_core::exactmath::IntMatrix;
use nhdm_core::torus::PhaseVector;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "1.0";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: String,
    /// Arguments after the program name, as given.
    pub command: Vec<String>,
    pub n_doublets: Option<usize>,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Classification(Classification),
    Smith(Smith),
    Charges(Charges),
    Construction(Construction),
    CpExtension(CpExtension),
    Z3z3(Z3z3),
    OrderBound(OrderBound),
    Conjecture(Conjecture),
    Witness(Witness),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub finite_only: bool,
    pub max_finite_order: u64,
    pub lattice_count: usize,
    pub groups: Vec<GroupRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub name: String,
    pub order: String,
    pub witness: Vec<String>,
    pub generators: Vec<Vec<String>>,
    pub embeddings: Vec<EmbeddingRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRow {
    pub eigenspace_pattern: Vec<usize>,
    pub witness: Vec<String>,
    pub lattices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Smith {
    pub matrix: IntMatrix,
    pub diagonal: Vec<String>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub group: String,
    pub order: String,
    pub generators: Vec<GeneratorRow>,
    pub directions: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRow {
    pub order: u64,
    /// Torus angles in units of 2π.
    pub angles: Vec<String>,
    /// Per-doublet phases in units of 2π.
    pub phases: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Charges {
    pub a_matrix: IntMatrix,
    pub monomials: Vec<ChargeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeRow {
    pub monomial: String,
    pub charge: Vec<String>,
    pub c_row: Vec<String>,
    pub row_type: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub family: String,
    pub c_matrix: IntMatrix,
    pub row_types: Vec<u8>,
    pub smith_diagonal: Vec<String>,
    pub determinant: String,
    pub group: String,
    pub witness: Vec<String>,
    pub charges_match: bool,
    pub potential_group: Option<String>,
    pub blocks: Vec<BlockRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRow {
    pub size: usize,
    pub order: u64,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpExtension {
    /// Set when the verdicts rest on the generalized-permutation ansatz
    /// beyond the fully settled three-doublet case.
    pub best_effort: bool,
    pub candidates: Vec<CandidateRow>,
    pub realizable: Option<Vec<String>>,
    pub rejected: Option<Vec<RejectedRow>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub base: String,
    pub signature: String,
    pub involution: Vec<usize>,
    pub generator: MatrixRow,
    pub square: Vec<String>,
    pub restrictions: Vec<String>,
    pub phase_relations: Vec<String>,
    pub verdict: VerdictRow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutes_with_base: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub killed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RejectedRow {
    pub group: String,
    pub failure_modes: Vec<String>,
}

/// Generalized permutation: 1-based target column per row and the phase
/// of each entry in units of 2π.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub permutation: Vec<usize>,
    pub phases: Vec<String>,
}

impl MatrixRow {
    pub fn new(x: &GenPermMatrix, names: &[String]) -> Self {
        MatrixRow {
            permutation: x.perm().iter().map(|p| p + 1).collect(),
            phases: x.phases().iter().map(|p| p.render(names)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Z3z3 {
    pub verdict: String,
    pub potential: String,
    pub a: MatrixRow,
    pub b: MatrixRow,
    pub swap: MatrixRow,
    pub invariant_under_a: bool,
    pub invariant_under_b: bool,
    pub invariant_under_swap: bool,
    pub generators_commute: bool,
    pub commutator: Vec<String>,
    pub commutator_central: bool,
    pub diagonal_symmetry: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderBound {
    pub bound: u64,
    pub max_finite_order: u64,
    pub attained: bool,
    pub exceeded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conjecture {
    pub order_bound: u64,
    pub realized: Vec<String>,
    pub not_found: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub group: String,
    pub status: String,
    pub monomials: Vec<String>,
    pub generators: Vec<Vec<String>>,
    pub potential: Option<String>,
}

pub fn phases(x: &PhaseVector) -> Vec<String> {
    x.phases().iter().map(ToString::to_string).collect()
}

fn tuple(items: &[String]) -> String {
    format!("({})", items.join(", "))
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.join(" ")
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let o = &mut out;
        if let Some(n) = self.n_doublets {
            let _ = writeln!(o, "doublets: {n}");
        }
        match &self.payload {
            Payload::Classification(c) => {
                let what = if c.finite_only {
                    "finite"
                } else {
                    "realizable"
                };
                let _ = writeln!(
                    o,
                    "{} {what} torus subgroups ({} charge lattices)",
                    c.groups.len(),
                    c.lattice_count
                );
                let _ = writeln!(o, "max finite order: {}", c.max_finite_order);
                let width = c.groups.iter().map(|g| g.name.len()).max().unwrap_or(0);
                for g in &c.groups {
                    let _ = writeln!(
                        o,
                        "  {:<width$}  order {:<8}  {}",
                        g.name,
                        g.order,
                        list(&g.witness)
                    );
                }
            }
            Payload::Smith(s) => {
                let _ = writeln!(o, "matrix:\n{}", s.matrix.to_string().trim_end());
                let _ = writeln!(o, "d = {}", tuple(&s.diagonal));
                let _ = writeln!(o, "group: {} (order {})", s.group, s.order);
                for g in &s.generators {
                    let _ = writeln!(
                        o,
                        "generator of order {}: angles {} phases {} (units of 2π)",
                        g.order,
                        tuple(&g.angles),
                        tuple(&g.phases)
                    );
                }
                for d in &s.directions {
                    let _ = writeln!(o, "continuous direction: {}", tuple(d));
                }
            }
            Payload::Charges(c) => {
                let _ = writeln!(o, "A =\n{}", c.a_matrix.to_string().trim_end());
                for r in &c.monomials {
                    let ty = r
                        .row_type
                        .map_or("invalid".to_string(), |t| format!("type {t}"));
                    let _ = writeln!(
                        o,
                        "  {:<18} charge {:<16} c {:<16} {ty}",
                        r.monomial,
                        tuple(&r.charge),
                        tuple(&r.c_row)
                    );
                }
            }
            Payload::Construction(c) => {
                let _ = writeln!(o, "{} construction", c.family);
                let _ = writeln!(o, "c =\n{}", c.c_matrix.to_string().trim_end());
                let types: Vec<String> = c.row_types.iter().map(ToString::to_string).collect();
                let _ = writeln!(o, "row types: {}", types.join(" "));
                let _ = writeln!(
                    o,
                    "d = {}  det = {}",
                    tuple(&c.smith_diagonal),
                    c.determinant
                );
                let _ = writeln!(o, "group: {}", c.group);
                for b in &c.blocks {
                    let _ = writeln!(o, "block {} -> Z{} ({} bound)", b.size, b.order, b.bound);
                }
                let _ = writeln!(o, "witness: {}", list(&c.witness));
                let _ = writeln!(o, "witness charges equal c·A: {}", c.charges_match);
                if let Some(g) = &c.potential_group {
                    let _ = writeln!(o, "group of witness potential: {g}");
                }
            }
            Payload::CpExtension(c) => {
                if c.best_effort {
                    let _ = writeln!(o, "note: best effort beyond three doublets");
                }
                for k in &c.candidates {
                    let _ = writeln!(o, "{} over {}: {}", k.signature, k.base, k.verdict.verdict);
                    let _ = writeln!(o, "  generator x·J with x = {}", matrix_text(&k.generator));
                    let _ = writeln!(o, "  square {}", tuple(&k.square));
                    for r in &k.restrictions {
                        let _ = writeln!(o, "  restriction {r}");
                    }
                    for r in &k.phase_relations {
                        let _ = writeln!(o, "  phases {r}");
                    }
                    if let Some(w) = &k.verdict.witness_text {
                        let _ = writeln!(o, "  extra symmetry {w}");
                    }
                    if let Some(killed) = &k.verdict.killed {
                        let _ = writeln!(o, "  forced to vanish: {}", list(killed));
                    }
                    if let Some(r) = &k.verdict.residual {
                        let _ = writeln!(o, "  residual torus symmetry {r}");
                    }
                }
                if let Some(r) = &c.realizable {
                    let _ = writeln!(o, "realizable: {}", list(r));
                }
                for r in c.rejected.iter().flatten() {
                    let _ = writeln!(o, "rejected: {} ({})", r.group, r.failure_modes.join(", "));
                }
            }
            Payload::Z3z3(z) => {
                let _ = writeln!(o, "{}", z.potential.trim_end());
                let _ = writeln!(o, "invariant under a: {}", z.invariant_under_a);
                let _ = writeln!(o, "invariant under b: {}", z.invariant_under_b);
                let _ = writeln!(o, "a and b commute mod center: {}", z.generators_commute);
                let _ = writeln!(
                    o,
                    "invariant under swap {}: {}",
                    matrix_text(&z.swap),
                    z.invariant_under_swap
                );
                let _ = writeln!(
                    o,
                    "swap·a·swap⁻¹·a⁻¹ = diag{} central: {}",
                    tuple(&z.commutator),
                    z.commutator_central
                );
                let _ = writeln!(o, "diagonal symmetry: {}", z.diagonal_symmetry);
                let _ = writeln!(o, "verdict: {}", z.verdict);
            }
            Payload::OrderBound(b) => {
                let _ = writeln!(o, "bound 2^(N-1) = {}", b.bound);
                let _ = writeln!(o, "max finite order = {}", b.max_finite_order);
                let _ = writeln!(o, "attained: {}  exceeded: {}", b.attained, b.exceeded);
            }
            Payload::Conjecture(c) => {
                let _ = writeln!(o, "abelian groups of order <= {}", c.order_bound);
                let _ = writeln!(o, "found: {}", list(&c.realized));
                let _ = writeln!(o, "not found: {}", list(&c.not_found));
            }
            Payload::Witness(w) => {
                let _ = writeln!(o, "{}: {}", w.group, w.status);
                if let Some(p) = &w.potential {
                    let _ = write!(o, "{p}");
                }
                for g in &w.generators {
                    let _ = writeln!(o, "generator diag{}", tuple(g));
                }
            }
        }
        out
    }
}

fn matrix_text(m: &MatrixRow) -> String {
    let perm: Vec<String> = m.permutation.iter().map(ToString::to_string).collect();
    format!("perm {} phases {}", tuple(&perm), tuple(&m.phases))
}
