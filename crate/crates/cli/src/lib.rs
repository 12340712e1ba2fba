//! Command-line front end. [`run`] parses arguments, does the work and
//! writes one report; the binary only forwards process arguments to it.

pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use nhdm_core::classifier::{
    classify, probe_conjecture, verify_order_bound, witness_potential, TorusSubgroup,
    WitnessOutcome,
};
use nhdm_core::constructions::{
    check_construction, cyclic_c_matrix, product_c_matrix, BlockBound, CMatrix, MAX_CONSTRUCT_N,
};
use nhdm_core::cpext::{
    analyse_all, check_z3z3, classify_cp, torus_embeddings, CpAnalysis, CpVerdict,
};
use nhdm_core::exactmath::{det, snf, IntMatrix};
use nhdm_core::groups::{group_from_snf, GroupSignature};
use nhdm_core::monomials::{a_matrix, build_x_matrix, c_decompose, enumerate_monomials, RowType};
use nhdm_core::torus::TorusBasis;
use nhdm_core::Error;

use report::*;

const CLASSIFY_MAX: usize = 6;
const BOUND_MAX: usize = 5;
const CHARGES_MAX: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "nhdm",
    version,
    about = "Abelian symmetry groups of N-Higgs-doublet potentials"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List realizable subgroups of the maximal torus.
    Classify {
        #[arg(long)]
        doublets: usize,
        /// Drop groups with a continuous part.
        #[arg(long)]
        finite_only: bool,
    },
    /// Smith form of a charge matrix and the group it defines.
    Snf {
        /// Rows separated by `;`, entries by `,`, e.g. "3,2;-3,-1".
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Charges and c-rows of every monomial.
    Charges {
        #[arg(long)]
        doublets: usize,
    },
    /// Explicit c-matrices realizing cyclic groups and their products.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Extensions of torus subgroups by an antiunitary generator.
    CpExtend {
        #[arg(long, default_value_t = 3)]
        doublets: usize,
        /// Restrict to one base group (e.g. Z4) or one extended group (e.g. Z8*).
        #[arg(long)]
        group: Option<String>,
    },
    /// The Z3xZ3-invariant three-doublet potential and its extra symmetry.
    CheckZ3z3 {
        #[arg(long, default_value_t = 3)]
        doublets: usize,
    },
    /// Largest finite order against 2^(N-1).
    VerifyBound {
        #[arg(long)]
        doublets: usize,
    },
    /// Which abelian groups of order at most 2^(N-1) occur.
    ProbeConjecture {
        #[arg(long)]
        doublets: usize,
    },
    /// Witness potential for one group.
    Witness {
        #[arg(long)]
        doublets: usize,
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Z_p from one block of size n.
    Cyclic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
    },
    /// Product of cyclic blocks.
    Product {
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
    },
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    // Every library error traces back to input.
    fn from(e: Error) -> Self {
        match e {
            Error::DoubletRange(n) => out_of_range(n, 2, usize::MAX),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn out_of_range(n: usize, lo: usize, hi: usize) -> Failure {
    let range = if hi == usize::MAX {
        format!("{lo}..")
    } else {
        format!("{lo}..={hi}")
    };
    Failure::Usage(format!(
        "doublet count out of supported range: got {n}, expected {range}"
    ))
}

fn check_doublets(n: usize, lo: usize, hi: usize) -> Result<(), Failure> {
    if (lo..=hi).contains(&n) {
        Ok(())
    } else {
        Err(out_of_range(n, lo, hi))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("NHDM_THREADS") else {
        return Ok(());
    };
    let k: usize = v.trim().parse().ok().filter(|&k| k > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "NHDM_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    // Only the first call in a process can size the global pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global();
    Ok(())
}

/// Runs one invocation. `args` includes the program name. Returns the
/// process exit code: 0 on success, 2 on usage errors, 1 otherwise.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let command: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = configure_threads().and_then(|_| execute(&cli.command));
    match result {
        Ok((n_doublets, payload)) => {
            let report = Report {
                format_version: FORMAT_VERSION.into(),
                command,
                n_doublets,
                payload,
            };
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            match out.write_all(text.as_bytes()) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

type Outcome = Result<(Option<usize>, Payload), Failure>;

fn execute(cmd: &Command) -> Outcome {
    match cmd {
        Command::Classify {
            doublets,
            finite_only,
        } => {
            check_doublets(*doublets, 2, CLASSIFY_MAX)?;
            Ok((
                Some(*doublets),
                Payload::Classification(classification(*doublets, *finite_only)?),
            ))
        }
        Command::Snf { matrix } => {
            let m: IntMatrix = matrix.parse()?;
            let s = smith(m)?;
            let n = s.matrix.cols() + 1;
            Ok((Some(n), Payload::Smith(s)))
        }
        Command::Charges { doublets } => {
            check_doublets(*doublets, 2, CHARGES_MAX)?;
            Ok((Some(*doublets), Payload::Charges(charges(*doublets)?)))
        }
        Command::Construct { family } => {
            let (c, name, blocks) = match family {
                Family::Cyclic { p, n } => {
                    let c = cyclic_c_matrix(*p, *n)?;
                    let bound = if *p == 1u64 << *n {
                        BlockBound::Boundary
                    } else {
                        BlockBound::Strict
                    };
                    let blocks = vec![BlockRow {
                        size: *n,
                        order: *p,
                        bound: bound_name(bound),
                    }];
                    (c, "cyclic", blocks)
                }
                Family::Product { partition, orders } => {
                    let pc = product_c_matrix(partition, orders)?;
                    let blocks = pc
                        .blocks
                        .iter()
                        .map(|b| BlockRow {
                            size: b.size,
                            order: b.order,
                            bound: bound_name(b.bound),
                        })
                        .collect();
                    (pc.c, "product", blocks)
                }
            };
            let n = c.size() + 1;
            Ok((
                Some(n),
                Payload::Construction(construction(&c, name, blocks)?),
            ))
        }
        Command::CpExtend { doublets, group } => {
            check_doublets(*doublets, 2, 4)?;
            Ok((
                Some(*doublets),
                Payload::CpExtension(cp_extension(*doublets, group.as_deref())?),
            ))
        }
        Command::CheckZ3z3 { doublets } => {
            check_doublets(*doublets, 3, 3)?;
            Ok((Some(3), Payload::Z3z3(z3z3())))
        }
        Command::VerifyBound { doublets } => {
            check_doublets(*doublets, 2, BOUND_MAX)?;
            let (max, _) = verify_order_bound(*doublets)?;
            let bound = 1u64 << (doublets - 1);
            Ok((
                Some(*doublets),
                Payload::OrderBound(OrderBound {
                    bound,
                    max_finite_order: max,
                    attained: max == bound,
                    exceeded: max > bound,
                }),
            ))
        }
        Command::ProbeConjecture { doublets } => {
            check_doublets(*doublets, 2, BOUND_MAX)?;
            let r = probe_conjecture(*doublets)?;
            Ok((
                Some(*doublets),
                Payload::Conjecture(Conjecture {
                    order_bound: r.order_bound,
                    realized: r.realized.iter().map(GroupSignature::name).collect(),
                    not_found: r.not_found.iter().map(GroupSignature::name).collect(),
                }),
            ))
        }
        Command::Witness { doublets, group } => {
            check_doublets(*doublets, 2, CLASSIFY_MAX)?;
            let g: GroupSignature = group.parse()?;
            if g.is_antiunitary() {
                return Err(Failure::Usage(
                    "witness covers unitary groups; use cp-extend for starred ones".into(),
                ));
            }
            let w = match witness_potential(&g, *doublets)? {
                WitnessOutcome::Realized {
                    signature,
                    monomials,
                    generators,
                    text,
                } => Witness {
                    group: signature.name(),
                    status: "realized".into(),
                    monomials: monomials.iter().map(ToString::to_string).collect(),
                    generators: generators.iter().map(phases).collect(),
                    potential: Some(text),
                },
                WitnessOutcome::NotRealizable { signature } => Witness {
                    group: signature.name(),
                    status: "not_realizable".into(),
                    monomials: Vec::new(),
                    generators: Vec::new(),
                    potential: None,
                },
            };
            Ok((Some(*doublets), Payload::Witness(w)))
        }
    }
}

fn bound_name(b: BlockBound) -> String {
    match b {
        BlockBound::Strict => "strict",
        BlockBound::Boundary => "boundary",
    }
    .into()
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn classification(n: usize, finite_only: bool) -> Result<Classification, Failure> {
    let r = classify(n, !finite_only)?;
    let groups = r
        .entries
        .iter()
        .map(|e| GroupRow {
            name: e.signature.name(),
            order: e.signature.order().to_string(),
            witness: strings(&e.witness),
            generators: e.generators.iter().map(phases).collect(),
            embeddings: e
                .embeddings
                .iter()
                .map(|m| EmbeddingRow {
                    eigenspace_pattern: m.eigenspace_pattern.clone(),
                    witness: strings(&m.witness),
                    lattices: m.lattices,
                })
                .collect(),
        })
        .collect();
    Ok(Classification {
        finite_only,
        max_finite_order: r.max_finite_order,
        lattice_count: r.lattice_count,
        groups,
    })
}

fn smith(m: IntMatrix) -> Result<Smith, Failure> {
    let n = m.cols() + 1;
    if !(2..=MAX_CONSTRUCT_N + 1).contains(&n) {
        return Err(out_of_range(n, 2, MAX_CONSTRUCT_N + 1));
    }
    let s = snf(&m);
    let group = group_from_snf(&s.d, m.cols())?;
    let basis = TorusBasis::new(n)?;
    let sub = TorusSubgroup::from_charges(&basis, &m)?;
    let generators = sub
        .generators()
        .iter()
        .zip(sub.generator_orders())
        .map(|(g, &order)| {
            let angles = basis.angles_of(g).map_err(Failure::from)?;
            Ok(GeneratorRow {
                order,
                angles: strings(&angles),
                phases: phases(g),
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Smith {
        diagonal: strings(&s.d),
        u: s.u,
        v: s.v,
        group: group.name(),
        order: group.order().to_string(),
        generators,
        directions: sub.directions().iter().map(|d| strings(d)).collect(),
        matrix: m,
    })
}

fn row_type_number(t: RowType) -> Option<u8> {
    match t {
        RowType::Type(k) => Some(k),
        RowType::Invalid => None,
    }
}

fn charges(n: usize) -> Result<Charges, Failure> {
    let basis = TorusBasis::new(n)?;
    let monomials = enumerate_monomials(n);
    let x = build_x_matrix(&monomials, &basis);
    let (c, types) = c_decompose(&x, n)?;
    let rows = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| ChargeRow {
            monomial: m.to_string(),
            charge: strings(x.row(i)),
            c_row: strings(c.row(i)),
            row_type: row_type_number(types[i]),
        })
        .collect();
    Ok(Charges {
        a_matrix: a_matrix(n)?,
        monomials: rows,
    })
}

fn construction(c: &CMatrix, family: &str, blocks: Vec<BlockRow>) -> Result<Construction, Failure> {
    let check = check_construction(c, MAX_CONSTRUCT_N)?;
    Ok(Construction {
        family: family.into(),
        c_matrix: c.matrix().clone(),
        row_types: c
            .row_types()
            .iter()
            .filter_map(|&t| row_type_number(t))
            .collect(),
        smith_diagonal: strings(&c.smith_diagonal()),
        determinant: det(c.matrix())?.to_string(),
        group: check.group.name(),
        witness: strings(&check.witness),
        charges_match: check.charges_match,
        potential_group: check.potential_group.as_ref().map(GroupSignature::name),
        blocks,
    })
}

fn candidate_row(a: &CpAnalysis) -> CandidateRow {
    let names = &a.potential.symbol_names;
    let verdict = match &a.verdict {
        CpVerdict::Realizable => VerdictRow {
            verdict: a.verdict.kind().into(),
            witness: None,
            witness_text: None,
            commutes_with_base: None,
            killed: None,
            residual: None,
        },
        CpVerdict::EnlargedUnitary {
            witness,
            witness_text,
            commutes_with_base,
        } => VerdictRow {
            verdict: a.verdict.kind().into(),
            witness: Some(MatrixRow::new(witness, names)),
            witness_text: Some(witness_text.clone()),
            commutes_with_base: Some(*commutes_with_base),
            killed: None,
            residual: None,
        },
        CpVerdict::ContinuousDegeneration { killed, residual } => VerdictRow {
            verdict: a.verdict.kind().into(),
            witness: None,
            witness_text: None,
            commutes_with_base: None,
            killed: Some(strings(killed)),
            residual: Some(residual.name()),
        },
    };
    CandidateRow {
        base: a.candidate.base_signature().name(),
        signature: a.candidate.signature.name(),
        involution: a.candidate.involution.iter().map(|i| i + 1).collect(),
        generator: MatrixRow::new(&a.candidate.generator.unitary_part, names),
        square: phases(&a.candidate.square),
        restrictions: a.potential.restrictions(),
        phase_relations: a.constraints.render(),
        verdict,
    }
}

fn cp_extension(n: usize, group: Option<&str>) -> Result<CpExtension, Failure> {
    let best_effort = n != 3;
    let Some(name) = group else {
        if best_effort {
            return Err(Failure::Usage(
                "the full antiunitary classification is settled only for 3 doublets; pass --group"
                    .into(),
            ));
        }
        let r = classify_cp(n)?;
        return Ok(CpExtension {
            best_effort,
            candidates: r.analyses.iter().map(candidate_row).collect(),
            realizable: Some(r.realizable.iter().map(GroupSignature::name).collect()),
            rejected: Some(
                r.rejected
                    .iter()
                    .map(|(g, modes)| RejectedRow {
                        group: g.name(),
                        failure_modes: strings(modes),
                    })
                    .collect(),
            ),
        });
    };
    let g: GroupSignature = name.parse()?;
    let bases: Vec<TorusSubgroup> = torus_embeddings(n)?
        .into_iter()
        .filter(|b| g.is_antiunitary() || *b.signature() == g)
        .collect();
    let analyses: Vec<CpAnalysis> = analyse_all(&bases)?
        .into_iter()
        .filter(|a| !g.is_antiunitary() || a.candidate.signature == g)
        .collect();
    if analyses.is_empty() && bases.is_empty() {
        return Err(Failure::Usage(format!(
            "{g} is not a realizable torus subgroup for {n} doublets"
        )));
    }
    Ok(CpExtension {
        best_effort,
        candidates: analyses.iter().map(candidate_row).collect(),
        realizable: None,
        rejected: None,
    })
}

fn z3z3() -> Z3z3 {
    let r = check_z3z3();
    let names = vec!["arg(λ3)".to_string()];
    let potential = nhdm_core::cpext::z3z3_potential().render(Default::default());
    Z3z3 {
        verdict: if r.realizable {
            "realizable"
        } else {
            "not_realizable"
        }
        .into(),
        potential,
        a: MatrixRow::new(&r.a, &names),
        b: MatrixRow::new(&r.b, &names),
        swap: MatrixRow::new(&r.swap, &names),
        invariant_under_a: r.invariant_under_a,
        invariant_under_b: r.invariant_under_b,
        invariant_under_swap: r.invariant_under_swap,
        generators_commute: r.generators_commute,
        commutator: phases(&r.commutator),
        commutator_central: r.commutator_central,
        diagonal_symmetry: r.diagonal_symmetry.name(),
    }
}
