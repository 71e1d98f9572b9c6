use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use rsd_core::rsd::{self, Metrics, RsdConfig, SamplerKind};
use rsd_core::{
    map_operator, Boundary, CostKind, FermionOperator, LatticeSpec, Mapper, QubitHamiltonian,
};

use crate::output::{sha256_hex, sibling, write_all_atomic};
use crate::{
    BoundaryArg, BuildArgs, CompareArgs, CostArg, MapArgs, MapperArg, MetricsArgs, ModelArg,
    OptimizeArgs, SamplerArg,
};

#[derive(Debug)]
pub enum CliError {
    Core(rsd_core::Error),
    /// Input file could not be read.
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Output could not be written.
    Write(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Read { path, source } => {
                write!(f, "cannot read {}: {source}", path.display())
            }
            CliError::Write(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl CliError {
    /// 2 usage, 3 input format, 4 numeric integrity, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        use rsd_core::Error as E;
        match self {
            CliError::Core(E::InvalidConfig(_) | E::DuplicateIndex(_) | E::DegenerateCnot(_)) => 2,
            CliError::Core(E::ImaginaryResidue { .. } | E::NonFinite(_) | E::ZeroReference) => 4,
            CliError::Core(E::Io(_)) | CliError::Write(_) => 1,
            CliError::Core(_) | CliError::Read { .. } => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<(String, Vec<u8>)> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| rsd_core::Error::Parse(format!("{} is not UTF-8", path.display())))?;
    Ok((text, bytes))
}

fn load_hamiltonian(path: &Path) -> Result<(QubitHamiltonian, Vec<u8>)> {
    let (text, bytes) = read_text(path)?;
    Ok((QubitHamiltonian::from_json(&text)?, bytes))
}

fn emit(out: Option<&Path>, text: String) -> Result<()> {
    match out {
        Some(p) => {
            write_all_atomic(&[(p.to_path_buf(), text.into_bytes())]).map_err(CliError::Write)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn metrics_text(m: &Metrics) -> String {
    format!(
        "n_qubits {}\nterms {}\npw {}\nwpw {}\naverage_pw {}\n",
        m.n_qubits, m.n_terms, m.pw, m.wpw, m.average_pw
    )
}

pub fn build(args: &BuildArgs) -> Result<()> {
    let boundary = match args.boundary {
        BoundaryArg::Open => Boundary::Open,
        BoundaryArg::Periodic => Boundary::Periodic,
    };
    let spec = match args.model {
        ModelArg::Chain => LatticeSpec::chain(args.sites, args.range),
        ModelArg::Alltoall => LatticeSpec::all_to_all(args.sites),
        ModelArg::Grid => LatticeSpec::grid(args.sites),
        ModelArg::Hubbard => LatticeSpec::hubbard(args.sites, args.t_hop, args.u_int),
    }
    .with_boundary(boundary);
    let f = spec.build()?;
    eprintln!("modes {} terms {}", f.n_modes(), f.len());
    emit(args.out.as_deref(), f.to_json())
}

pub fn map(args: &MapArgs) -> Result<()> {
    let (text, _) = read_text(&args.input)?;
    let f = FermionOperator::from_json(&text)?;
    let mapper = match args.mapper {
        MapperArg::Jw => Mapper::JordanWigner,
        MapperArg::Bk => Mapper::BravyiKitaev,
        MapperArg::Ternary => Mapper::TernaryTree,
    };
    let h = map_operator(mapper, &f)?;
    let report = metrics_text(&Metrics::of(&h));
    match &args.out {
        Some(p) => {
            emit(Some(p), h.to_json())?;
            print!("{report}");
        }
        None => {
            eprint!("{report}");
            print!("{}", h.to_json());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command_line: Vec<String>,
    config: RsdConfig,
    seed: u64,
    input: FileDigest,
    outputs: Vec<FileDigest>,
    initial: Metrics,
    #[serde(rename = "final")]
    final_: Metrics,
    iterations_run: usize,
    accepted_steps: usize,
    gate_count: usize,
    wall_time_seconds: f64,
    threads: usize,
}

pub fn optimize(args: &OptimizeArgs) -> Result<()> {
    let (h0, input_bytes) = load_hamiltonian(&args.input)?;
    let cfg = RsdConfig {
        iterations: args.iters,
        width: args.width,
        depth: args.depth,
        cost_kind: match args.cost {
            CostArg::Pw => CostKind::Pw,
            CostArg::Wpw => CostKind::Wpw,
        },
        sampler: match args.sampler {
            SamplerArg::Hamming => SamplerKind::Hamming {
                epsilon: args.epsilon,
            },
            SamplerArg::Uniform => SamplerKind::Uniform,
        },
        seed: args.seed.unwrap_or_else(rsd::os_seed),
        patience: args.patience,
        transposition_table: args.transposition_table,
        solve_cache: !args.no_solve_cache,
    };
    cfg.validate(h0.n_qubits())?;

    let started = Instant::now();
    let result = rsd::rsd_optimize(&h0, &cfg)?;
    let wall = started.elapsed().as_secs_f64();

    let gates_path = args
        .gates
        .clone()
        .unwrap_or_else(|| sibling(&args.out, "gates.txt"));
    let traj_path = args
        .trajectory
        .clone()
        .unwrap_or_else(|| sibling(&args.out, "trajectory.csv"));
    let manifest_path = args
        .manifest
        .clone()
        .unwrap_or_else(|| sibling(&args.out, "manifest.json"));

    let mut files = vec![
        (args.out.clone(), result.hamiltonian.to_json().into_bytes()),
        (gates_path, result.gates.to_log().into_bytes()),
        (
            traj_path,
            rsd::trajectory_csv(&result.trajectory).into_bytes(),
        ),
    ];
    let summary = rsd::RunSummary::new(&h0, &cfg, &result);
    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        config: cfg.clone(),
        seed: cfg.seed,
        input: FileDigest {
            path: args.input.display().to_string(),
            sha256: sha256_hex(&input_bytes),
        },
        outputs: files
            .iter()
            .map(|(p, b)| FileDigest {
                path: p.display().to_string(),
                sha256: sha256_hex(b),
            })
            .collect(),
        initial: summary.initial,
        final_: summary.final_,
        iterations_run: summary.iterations_run,
        accepted_steps: summary.accepted_steps,
        gate_count: summary.gate_count,
        wall_time_seconds: wall,
        threads: rayon::current_num_threads(),
    };
    let mut manifest_json = serde_json::to_string_pretty(&manifest).expect("serializable");
    manifest_json.push('\n');
    files.push((manifest_path, manifest_json.into_bytes()));
    write_all_atomic(&files).map_err(CliError::Write)?;

    println!(
        "seed {}\ninitial_pw {}\nfinal_pw {}\ninitial_wpw {}\nfinal_wpw {}\naccepted {}/{}",
        cfg.seed,
        manifest.initial.pw,
        manifest.final_.pw,
        manifest.initial.wpw,
        manifest.final_.wpw,
        manifest.accepted_steps,
        manifest.iterations_run
    );
    Ok(())
}

pub fn metrics(args: &MetricsArgs) -> Result<()> {
    let (h, _) = load_hamiltonian(&args.input)?;
    let m = Metrics::of(&h);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&m).expect("serializable")
        );
    } else {
        print!("{}", metrics_text(&m));
    }
    Ok(())
}

#[derive(Serialize)]
struct Comparison {
    candidate: Metrics,
    reference: Metrics,
    pr: f64,
    pr_weighted: f64,
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let (a, _) = load_hamiltonian(&args.candidate)?;
    let (b, _) = load_hamiltonian(&args.reference)?;
    if a.n_qubits() != b.n_qubits() {
        return Err(rsd_core::Error::DimensionMismatch {
            left: a.n_qubits(),
            right: b.n_qubits(),
        }
        .into());
    }
    let (ma, mb) = (Metrics::of(&a), Metrics::of(&b));
    let cmp = Comparison {
        pr: rsd::percentage_reduction(ma.pw as f64, mb.pw as f64)?,
        pr_weighted: rsd::percentage_reduction(ma.wpw, mb.wpw)?,
        candidate: ma,
        reference: mb,
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&cmp).expect("serializable")
        );
    } else {
        println!("pr {}\npr_weighted {}", cmp.pr, cmp.pr_weighted);
    }
    Ok(())
}
