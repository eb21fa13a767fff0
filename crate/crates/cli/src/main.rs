use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use peq::io::{tensor_to_json, AnyLayer, AnyTensor};
use peq::{
    apply_dense_oracle, diagram_basis_dense, enumerate_partitions, op_count, orbit_basis, partition_of_tuple,
    plan, verify_basis, Capacity, DenseTensor, EquivariantLayer, Error, FieldKind, Scalar, SetPartition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "peq", version, about = "Permutation-equivariant linear layers")]
struct Cli {
    /// Largest dense tensor (in entries) any command may materialize.
    #[arg(long, global = true, env = "PEQ_MAX_ENTRIES", default_value_t = Capacity::DEFAULT_MAX_ENTRIES)]
    max_entries: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List set partitions of L legs with at most N blocks.
    Enumerate {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
    },
    /// Equality pattern of a 1-based index tuple.
    PartitionOf {
        #[arg(long)]
        tuple: String,
        /// Base dimension; defaults to the largest entry of the tuple.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Dense orbit or diagram basis tensor.
    Basis {
        #[arg(long, value_enum)]
        kind: BasisKind,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a layer file to a tensor file.
    Apply {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mprime: usize,
        #[arg(long)]
        layer: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Use the dense reference contraction instead of the fast path.
        #[arg(long)]
        oracle: bool,
    },
    /// Check that the diagram basis is a basis over a field.
    Verify {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: FieldKind,
    },
    /// Time fast and dense application of one basis element.
    Bench {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mprime: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        partition: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisKind {
    Orbit,
    Diagram,
}

enum Failure {
    Lib(Error),
    Io(String),
    /// Verification ran but the answer was negative; the report is still printed.
    NotBasis(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<Option<Value>, Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::parse(format!("{}: {e}", path.display()))))
}

fn parse_tuple(s: &str) -> Result<Vec<usize>, Error> {
    s.split_whitespace()
        .map(|x| x.parse::<usize>().map_err(|_| Error::parse(format!("bad tuple entry {x:?}"))))
        .collect()
}

fn partition_of(tuple: &str, n: Option<usize>) -> CmdResult {
    let tuple = parse_tuple(tuple)?;
    let n = n.unwrap_or_else(|| tuple.iter().copied().max().unwrap_or(0));
    Ok(Some(json!(partition_of_tuple(&tuple, n)?.to_string())))
}

fn basis(kind: BasisKind, partition: &str, n: usize, out: Option<&Path>, cap: Capacity) -> CmdResult {
    let p: SetPartition = partition.parse()?;
    cap.check(n, p.len())?;
    let t = match kind {
        BasisKind::Orbit => orbit_basis::<i64>(&p, n)?,
        BasisKind::Diagram => diagram_basis_dense::<i64>(&p, n)?,
    };
    let v = tensor_to_json(&t);
    match out {
        Some(path) => {
            std::fs::write(path, format!("{v}\n")).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(v)),
    }
}

fn apply_typed<S: Scalar>(
    layer: &EquivariantLayer<S>,
    v: &DenseTensor<S>,
    oracle: bool,
    cap: Capacity,
) -> Result<DenseTensor<S>, Error> {
    if v.n() != layer.n() {
        return Err(Error::domain(format!("input has n = {}, layer has n = {}", v.n(), layer.n())));
    }
    cap.check(layer.n(), layer.mprime())?;
    if !oracle {
        return layer.apply(v);
    }
    let mut out = DenseTensor::zeros(layer.n(), layer.mprime())?;
    for (p, c) in layer.coeffs() {
        let term = apply_dense_oracle(p, layer.m(), layer.mprime(), layer.n(), v, cap)?;
        out.axpy(c, &term)?;
    }
    Ok(out)
}

fn apply(m: usize, mprime: usize, layer: &Path, input: &Path, oracle: bool, cap: Capacity) -> CmdResult {
    let layer = AnyLayer::from_json(&read_json(layer)?)?;
    let input = AnyTensor::from_json(&read_json(input)?)?;
    let (lm, lmp) = match &layer {
        AnyLayer::Int(l) => (l.m(), l.mprime()),
        AnyLayer::Rational(l) => (l.m(), l.mprime()),
        AnyLayer::Gf2(l) => (l.m(), l.mprime()),
        AnyLayer::F64(l) => (l.m(), l.mprime()),
    };
    if (lm, lmp) != (m, mprime) {
        return Err(Error::domain(format!("layer file maps order {lm} to {lmp}, flags say {m} to {mprime}")).into());
    }
    let out = match (&layer, &input) {
        (AnyLayer::Int(l), AnyTensor::Int(v)) => tensor_to_json(&apply_typed(l, v, oracle, cap)?),
        (AnyLayer::Rational(l), AnyTensor::Rational(v)) => tensor_to_json(&apply_typed(l, v, oracle, cap)?),
        (AnyLayer::Gf2(l), AnyTensor::Gf2(v)) => tensor_to_json(&apply_typed(l, v, oracle, cap)?),
        (AnyLayer::F64(l), AnyTensor::F64(v)) => tensor_to_json(&apply_typed(l, v, oracle, cap)?),
        _ => {
            return Err(Error::domain(format!(
                "layer scalar type {} does not match input scalar type {}",
                layer.kind(),
                input.kind()
            ))
            .into())
        }
    };
    Ok(Some(out))
}

fn verify(l: usize, n: usize, field: FieldKind, cap: Capacity) -> CmdResult {
    let report = verify_basis(l, n, field, cap)?;
    let v = serde_json::to_value(&report).expect("report serializes");
    if report.is_basis {
        Ok(Some(v))
    } else {
        Err(Failure::NotBasis(v))
    }
}

fn median_ns(reps: usize, mut f: impl FnMut() -> Result<(), Error>) -> Result<u128, Error> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed().as_nanos());
    }
    times.sort_unstable();
    Ok(times[times.len() / 2])
}

fn bench(m: usize, mprime: usize, n: usize, partition: &str, reps: usize, cap: Capacity) -> CmdResult {
    if reps == 0 {
        return Err(Error::domain("--reps must be at least 1").into());
    }
    let p: SetPartition = partition.parse()?;
    let pl = plan(&p, m, mprime, n)?;
    cap.check(n, m + mprime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let v = DenseTensor::<f64>::from_fn(n, m, |_| rng.gen_range(-1.0..1.0))?;
    let cost = op_count(&pl);
    let fast_ns = median_ns(reps, || peq::apply_fast(&pl, &v).map(|t| drop(std::hint::black_box(t))))?;
    let dense_ns = median_ns(reps, || {
        apply_dense_oracle(&p, m, mprime, n, &v, cap).map(|t| drop(std::hint::black_box(t)))
    })?;
    Ok(Some(json!({
        "fast_muladds": cost.fast_muladds,
        "dense_muladds": cost.dense_muladds,
        "fast_ns": fast_ns,
        "dense_ns": dense_ns,
    })))
}

fn run(cli: Cli) -> CmdResult {
    let cap = Capacity::new(cli.max_entries);
    match cli.command {
        Command::Enumerate { l, n } => {
            let names: Vec<String> = enumerate_partitions(l, n).iter().map(ToString::to_string).collect();
            Ok(Some(json!(names)))
        }
        Command::PartitionOf { tuple, n } => partition_of(&tuple, n),
        Command::Basis { kind, partition, n, out } => basis(kind, &partition, n, out.as_deref(), cap),
        Command::Apply { m, mprime, layer, input, oracle } => apply(m, mprime, &layer, &input, oracle, cap),
        Command::Verify { l, n, field } => verify(l, n, field, cap),
        Command::Bench { m, mprime, n, partition, reps } => bench(m, mprime, n, &partition, reps, cap),
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    println!("{}", json!({ "error": msg.to_string() }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return fail(1, msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
        }
    };
    match run(cli) {
        Ok(Some(v)) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Failure::NotBasis(v)) => {
            println!("{v}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e @ Error::Capacity { .. })) => fail(2, e),
        Err(Failure::Lib(e)) => fail(1, e),
        Err(Failure::Io(msg)) => fail(1, msg),
    }
}
