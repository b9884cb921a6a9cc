//! Implementations of the four commands plus shared plumbing: input
//! digests, atomic output writes, key=value reports, and the mapping from
//! library errors to the exit-code contract (0 ok, 1 usage, 2 input parse,
//! 3 verification failure, 4 precondition violation, 5 size cap).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

use ctqw_core::circuit::{Circuit, CostModel, GateCounts};
use ctqw_core::decompose::decompose_to_stars;
use ctqw_core::generators::{cycle, path as path_graph, random_regular};
use ctqw_core::graph::{Graph, GraphError, DEFAULT_DENSE_CAP};
use ctqw_core::pauli::{synthesize_ctqw_pauli, PauliSynthesis};
use ctqw_core::sim::{circuit_unitary, sector_distance, SimError, DEFAULT_UNITARY_CAP};
use ctqw_core::trotter::{
    compose_circuit, analytic_exponential_bound, plan_gate_counts, synthesize_ctqw,
    walk_reference, HamiltonianTerms, Synthesis, SynthesisOptions, SynthesizeError, TrotterError,
    TrotterPlan,
};

use crate::{
    BenchmarkArgs, DecomposeArgs, FamilyArg, MethodArg, ModeArg, SynthesizeArgs, VerifyArgs,
    WalkParams,
};

#[derive(Debug)]
pub enum CliError {
    /// Exit 1: bad arguments or unusable output destination.
    Usage(String),
    /// Exit 2: unreadable or malformed input, or inconsistent inputs.
    Input(String),
    /// Exit 3: the measured distance misses the target.
    Verification { distance: f64, epsilon: f64 },
    /// Exit 4: parameters violate an analytic precondition.
    Precondition(String),
    /// Exit 5: the request exceeds a size cap.
    SizeCap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verification { .. } => 3,
            CliError::Precondition(_) => 4,
            CliError::SizeCap(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg)
            | CliError::Input(msg)
            | CliError::Precondition(msg)
            | CliError::SizeCap(msg) => f.write_str(msg),
            CliError::Verification { distance, epsilon } => write!(
                f,
                "verification failed: measured distance {distance} exceeds epsilon {epsilon}"
            ),
        }
    }
}

fn map_graph_error(e: GraphError) -> CliError {
    match e {
        GraphError::DenseCapExceeded { .. } => CliError::SizeCap(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn map_sim_error(e: SimError) -> CliError {
    match e {
        SimError::UnitaryCapExceeded { .. } => CliError::SizeCap(e.to_string()),
        SimError::DimensionMismatch { .. } => CliError::Input(e.to_string()),
    }
}

fn map_synthesize_error(e: SynthesizeError) -> CliError {
    match e {
        SynthesizeError::Trotter(t) => match t {
            TrotterError::InvalidOrder
            | TrotterError::EpsilonOutOfRange { .. }
            | TrotterError::EvolutionTooShort { .. } => CliError::Precondition(t.to_string()),
            TrotterError::SegmentCapExceeded { .. } => CliError::SizeCap(t.to_string()),
        },
        SynthesizeError::Graph(g) => map_graph_error(g),
        SynthesizeError::Sim(s) => map_sim_error(s),
    }
}

fn validate_walk(walk: &WalkParams) -> Result<(), CliError> {
    if !walk.gamma.is_finite() {
        return Err(CliError::Precondition("gamma must be finite".into()));
    }
    if !walk.time.is_finite() {
        return Err(CliError::Precondition("time must be finite".into()));
    }
    validate_epsilon(walk.epsilon)?;
    if walk.order_k == 0 {
        return Err(CliError::Precondition(
            "product-formula order parameter k must be at least 1".into(),
        ));
    }
    Ok(())
}

fn validate_epsilon(epsilon: f64) -> Result<(), CliError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(CliError::Precondition(format!(
            "target accuracy {epsilon} is out of range: the contract needs 0 < epsilon <= 1"
        )));
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<(Graph, String), CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let digest = format!("{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8 text", path.display())))?;
    let g = Graph::parse_edge_list(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((g, digest))
}

/// Writes via a temporary file in the destination directory and renames,
/// so failures never leave a partial output file behind.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err =
        |e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp.{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

/// Flat key=value report accumulated in order and printed on success.
struct Report {
    lines: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report { lines: vec![format!("command={command}")] }
    }

    fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push(format!("{key}={value}"));
    }

    fn push_counts(&mut self, counts: &GateCounts) {
        self.push("gates_x", counts.x);
        self.push("gates_h", counts.h);
        self.push("gates_swap", counts.swap);
        self.push("gates_rx", counts.rx);
        self.push("gates_rz", counts.rz);
        self.push("gates_controlled", counts.controlled);
        self.push("gate_total", counts.raw_total);
        self.push("weighted_total", counts.weighted_total);
    }

    fn finish(mut self, start: Instant) {
        self.push("wall_seconds", format!("{:.3}", start.elapsed().as_secs_f64()));
        for line in &self.lines {
            println!("{line}");
        }
    }
}

pub fn cmd_decompose(args: &DecomposeArgs) -> Result<(), CliError> {
    let (g, _digest) = read_graph(&args.graph)?;
    let star_forests = decompose_to_stars(&g);

    let mut dump = String::new();
    let mut stars = 0usize;
    for sf in &star_forests {
        let (forest, color) = sf.origin;
        for star in &sf.stars {
            stars += 1;
            let leaves: Vec<String> = star.leaves.iter().map(usize::to_string).collect();
            dump.push_str(&format!(
                "forest={forest} color={color} center={} leaves={}\n",
                star.center,
                leaves.join(",")
            ));
        }
    }
    let d = g.degree_profile().max_degree;
    let summary =
        format!("d={d} forests={d} star_forests={} stars={stars}", star_forests.len());

    match &args.out {
        Some(out) => write_atomic(out, &dump)?,
        None => print!("{dump}"),
    }
    println!("{summary}");
    Ok(())
}

/// A planned synthesis from either term decomposition, with one interface
/// for counting, materializing, and reporting.
enum Planned {
    Star(Synthesis),
    Pauli(PauliSynthesis),
}

impl Planned {
    fn run(
        method: MethodArg,
        g: &Graph,
        walk: &WalkParams,
        mode: ModeArg,
        opts: &SynthesisOptions,
    ) -> Result<Planned, CliError> {
        let WalkParams { gamma, time, epsilon, order_k } = *walk;
        match method {
            MethodArg::Star => {
                synthesize_ctqw(g, gamma, time, epsilon, order_k, mode.to_mode(), opts)
                    .map(Planned::Star)
                    .map_err(map_synthesize_error)
            }
            MethodArg::Pauli => {
                synthesize_ctqw_pauli(g, gamma, time, epsilon, order_k, mode.to_mode(), opts)
                    .map(Planned::Pauli)
                    .map_err(map_synthesize_error)
            }
        }
    }

    fn plan(&self) -> &TrotterPlan {
        match self {
            Planned::Star(s) => &s.plan,
            Planned::Pauli(p) => &p.plan,
        }
    }

    fn measured(&self) -> Option<f64> {
        match self {
            Planned::Star(s) => s.measured_distance,
            Planned::Pauli(p) => p.measured_distance,
        }
    }

    fn norm_time(&self) -> f64 {
        match self {
            Planned::Star(s) => s.norm_time,
            Planned::Pauli(p) => p.norm_time,
        }
    }

    fn qubits(&self) -> usize {
        match self {
            Planned::Star(s) => s.terms.circuit_qubits(),
            Planned::Pauli(p) => p.terms.circuit_qubits(),
        }
    }

    fn counts(&self, model: &CostModel) -> GateCounts {
        match self {
            Planned::Star(s) => plan_gate_counts(&s.plan, &s.terms, model),
            Planned::Pauli(p) => plan_gate_counts(&p.plan, &p.terms, model),
        }
    }

    fn compose(&self) -> Circuit {
        match self {
            Planned::Star(s) => compose_circuit(&s.plan, &s.terms),
            Planned::Pauli(p) => compose_circuit(&p.plan, &p.terms),
        }
    }
}

pub fn cmd_synthesize(args: &SynthesizeArgs) -> Result<(), CliError> {
    let start = Instant::now();
    validate_walk(&args.walk)?;
    let (g, digest) = read_graph(&args.graph)?;
    let opts = SynthesisOptions::default();

    let planned = Planned::run(args.method, &g, &args.walk, args.mode, &opts)?;

    let model = CostModel::default();
    let counts = planned.counts(&model);
    if counts.raw_total > args.max_gates {
        return Err(CliError::SizeCap(format!(
            "planned circuit has {} gates, above the --max-gates limit of {}",
            counts.raw_total, args.max_gates
        )));
    }
    let circuit = planned.compose();
    write_atomic(&args.out, &circuit.to_text())?;

    let plan = planned.plan();
    let mut report = Report::new("synthesize");
    report.push("input", args.graph.display());
    report.push("digest", &digest);
    report.push("gamma", args.walk.gamma);
    report.push("time", args.walk.time);
    report.push("epsilon", args.walk.epsilon);
    report.push("order_k", args.walk.order_k);
    report.push("mode", args.mode.name());
    report.push("method", args.method.name());
    report.push("vertices", g.num_vertices());
    report.push("max_degree", g.degree_profile().max_degree);
    report.push("qubits", planned.qubits());
    report.push("m", plan.num_terms);
    report.push("r", plan.segments);
    if args.mode == ModeArg::Bound && plan.num_terms > 1 {
        let n_exp = analytic_exponential_bound(
            plan.num_terms,
            args.walk.order_k,
            planned.norm_time(),
            args.walk.epsilon,
        )
        .expect("bound-mode synthesis already validated these inputs");
        report.push("n_exp", n_exp);
    }
    report.push("exponentials", plan.merged_exponentials());
    report.push_counts(&counts);
    if let Some(distance) = planned.measured() {
        report.push("distance", distance);
    }
    report.push("out", args.out.display());
    report.finish(start);
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let start = Instant::now();
    if !args.gamma.is_finite() {
        return Err(CliError::Precondition("gamma must be finite".into()));
    }
    if !args.time.is_finite() {
        return Err(CliError::Precondition("time must be finite".into()));
    }
    validate_epsilon(args.epsilon)?;

    let (g, digest) = read_graph(&args.graph)?;
    let circuit_text = fs::read_to_string(&args.circuit)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.circuit.display())))?;
    let circuit = Circuit::parse(&circuit_text)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.circuit.display())))?;

    if circuit.num_qubits() > DEFAULT_UNITARY_CAP {
        return Err(CliError::SizeCap(format!(
            "circuit acts on {} qubits, above the simulator cap of {}",
            circuit.num_qubits(),
            DEFAULT_UNITARY_CAP
        )));
    }
    let n = g.working_qubits();
    if circuit.num_qubits() != n && circuit.num_qubits() != n + 1 {
        return Err(CliError::Input(format!(
            "circuit acts on {} qubits but this graph needs {n} (or {} with one ancilla)",
            circuit.num_qubits(),
            n + 1
        )));
    }

    let reference =
        walk_reference(&g, args.gamma, args.time, DEFAULT_DENSE_CAP).map_err(map_graph_error)?;
    let u = circuit_unitary(&circuit, DEFAULT_UNITARY_CAP).map_err(map_sim_error)?;
    let distance = sector_distance(&u, &reference).map_err(map_sim_error)?;

    let model = CostModel::default();
    let counts = circuit.gate_counts(&model);
    let mut report = Report::new("verify");
    report.push("input", args.graph.display());
    report.push("digest", &digest);
    report.push("circuit", args.circuit.display());
    report.push("gamma", args.gamma);
    report.push("time", args.time);
    report.push("epsilon", args.epsilon);
    report.push("qubits", circuit.num_qubits());
    report.push("gate_total", counts.raw_total);
    report.push("weighted_total", counts.weighted_total);
    report.push("distance", distance);
    report.finish(start);

    if distance <= args.epsilon {
        Ok(())
    } else {
        Err(CliError::Verification { distance, epsilon: args.epsilon })
    }
}

fn build_family(
    family: FamilyArg,
    n: usize,
    degree: usize,
    seed: u64,
) -> Result<Graph, CliError> {
    match family {
        FamilyArg::Cycle => {
            if n < 3 {
                return Err(CliError::Usage(format!("cycle family needs sizes >= 3, got {n}")));
            }
            Ok(cycle(n))
        }
        FamilyArg::Path => {
            if n < 1 {
                return Err(CliError::Usage("path family needs sizes >= 1".into()));
            }
            Ok(path_graph(n))
        }
        FamilyArg::RandomRegular => random_regular(n, degree, seed).map_err(CliError::Usage),
    }
}

struct BenchmarkRow {
    n: usize,
    d: usize,
    method: &'static str,
    m: usize,
    r: u64,
    gate_total: u64,
    weighted_total: u64,
    distance: Option<f64>,
    seconds: f64,
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), CliError> {
    validate_walk(&args.walk)?;
    let opts = SynthesisOptions::default();
    let model = CostModel::default();

    let mut rows = Vec::new();
    for &n in &args.sizes {
        let g = build_family(args.family, n, args.degree, args.seed)?;
        for method in [MethodArg::Star, MethodArg::Pauli] {
            let start = Instant::now();
            let planned = Planned::run(method, &g, &args.walk, ModeArg::Adaptive, &opts)?;
            let seconds = start.elapsed().as_secs_f64();
            let counts = planned.counts(&model);
            let plan = planned.plan();
            rows.push(BenchmarkRow {
                n,
                d: g.degree_profile().max_degree,
                method: method.name(),
                m: plan.num_terms,
                r: plan.segments,
                gate_total: counts.raw_total,
                weighted_total: counts.weighted_total,
                distance: planned.measured(),
                seconds,
            });
        }
    }
    rows.sort_by(|a, b| (a.n, a.method).cmp(&(b.n, b.method)));

    let mut csv = String::from("N,d,method,m,r,gate_total,weighted_total,distance,seconds\n");
    for row in &rows {
        let distance = row.distance.map(|d| d.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.3}\n",
            row.n,
            row.d,
            row.method,
            row.m,
            row.r,
            row.gate_total,
            row.weighted_total,
            distance,
            row.seconds
        ));
    }
    match &args.out {
        Some(out) => write_atomic(out, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
