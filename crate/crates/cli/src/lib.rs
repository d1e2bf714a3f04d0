//! Command-line front end: argument parsing, rendering and the `verify` suite.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gkm_cycle::cells::{
    check_subrepresentation, orbit_representative, poincare_polynomial, terminal_triples,
};
use gkm_cycle::cohomology::{
    basis_to_json, flow_up_basis, freeness_check, gkm_check, graded_rank, load_euler_table, local_indices,
    structure_constants, unique_basis_from, EquivariantClass, EulerClassTable,
};
use gkm_cycle::fixtures::{fixture, Fixture, FIXTURE_NAMES};
use gkm_cycle::grading::{attractive_grading, generic_cocharacter, verify_attractive};
use gkm_cycle::moment::{export_graph, project_delta, GraphFormat, MomentGraph};
use gkm_cycle::rep::RepJson;
use gkm_cycle::Error;
use gkm_cycle::symbolic::{rat, Polynomial, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const THREADS_VAR: &str = "GKM_CYCLE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "gkm-cycle", version, about = "Torus-equivariant cohomology of quiver Grassmannians for the cyclic quiver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Representation and dimension vector as JSON.
    #[arg(long, global = true, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,

    /// A bundled example, or `approx:n,k,N`.
    #[arg(long, global = true)]
    pub fixture: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Euler class table for `basis --unique`.
    #[arg(long, global = true)]
    pub euler_table: Option<PathBuf>,

    /// Normalize the flow-up classes by local indices.
    #[arg(long, global = true)]
    pub unique: bool,

    /// Drop the `d` part of every edge label.
    #[arg(long, global = true)]
    pub project_delta: bool,

    /// Highest degree checked for freeness.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_degree: u32,

    /// Seed for the random evaluation points of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Segments, coefficient quiver, grading and cell counts.
    Describe,
    /// Torus fixed points with cell dimensions and terminal triples.
    FixedPoints,
    /// The labelled moment graph.
    MomentGraph,
    /// Number of cells in each dimension.
    Betti,
    /// Flow-up or unique module basis.
    Basis,
    /// Check every invariant; exits 1 on a violation.
    Verify,
    /// List the bundled fixtures.
    Examples,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
    Table,
}

/// Bad invocation: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Runs with the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(argv, &mut out, &mut err)
}

/// Parses `argv` (including the program name), executes, and returns the exit
/// code: 0 on success, 1 on an invariant violation or failed computation, 2 on
/// bad arguments.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                let _ = writeln!(err, "error: {THREADS_VAR} must be a nonnegative integer, got `{v}`");
                return 2;
            }
        },
        Err(_) => 0,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((text, ok)) => {
            if let Err(e) = emit(&cli, &text, out) {
                let _ = writeln!(err, "error: {e:#}");
                return 1;
            }
            i32::from(!ok)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// The selected fixture or input file.
pub fn load(cli: &Cli) -> anyhow::Result<Fixture> {
    match (&cli.input, &cli.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            let json: RepJson =
                serde_json::from_str(&text).map_err(|e| usage(format!("parsing {}: {e}", path.display())))?;
            Fixture::from_json(&path.display().to_string(), json).map_err(|e| usage(e.to_string()))
        }
        (None, Some(name)) => fixture(name).map_err(|e| usage(e.to_string())),
        (None, None) => Err(usage("one of --input or --fixture is required")),
    }
}

/// Output text and whether every check passed.
fn execute(cli: &Cli) -> anyhow::Result<(String, bool)> {
    let format = cli.format.unwrap_or(Format::Table);
    if format == Format::Dot && cli.command != Command::MomentGraph {
        return Err(usage("--format dot only applies to moment-graph"));
    }
    if cli.command == Command::Examples {
        return Ok((examples(format)?, true));
    }
    let f = load(cli)?;
    let text = match cli.command {
        Command::Describe => describe(&f, format)?,
        Command::FixedPoints => fixed_points(&f, format)?,
        Command::MomentGraph => moment_graph(&f, format, cli.project_delta)?,
        Command::Betti => betti(&f, format)?,
        Command::Basis => basis(&f, format, cli)?,
        Command::Verify => {
            let report = verify(&f, &VerifyOptions { max_degree: cli.max_degree, seed: cli.seed });
            return Ok((report.render(format)?, report.ok()));
        }
        Command::Examples => unreachable!("handled above"),
    };
    Ok((text, true))
}

fn examples(format: Format) -> anyhow::Result<String> {
    let list: Vec<Fixture> = FIXTURE_NAMES.iter().map(|n| fixture(n)).collect::<Result<_, _>>()?;
    Ok(match format {
        Format::Json => {
            let v: Vec<_> = list.iter().map(|f| json!({"name": f.name, "summary": f.summary})).collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
        _ => {
            let mut s: String = list.iter().map(|f| format!("{:<8} {}\n", f.name, f.summary)).collect();
            s.push_str("approx:n,k,N  finite approximation of an affine Grassmannian\n");
            s
        }
    })
}

fn describe(f: &Fixture, format: Format) -> anyhow::Result<String> {
    let q = f.quiver()?;
    let rep = &f.rep;
    let grading = attractive_grading(&q);
    let cochar = generic_cocharacter(&q, &grading)?;
    let betti = poincare_polynomial(&q, &f.e)?;
    let segments: Vec<String> = rep.segments().iter().map(|s| format!("U({};{})", s.i, s.ell)).collect();
    let bases: Vec<Vec<String>> = (1..=q.n())
        .map(|i| q.basis(i).iter().map(|r| format!("({},{})", r.segment, r.position)).collect())
        .collect();
    if format == Format::Json {
        let v = json!({
            "name": f.name,
            "summary": f.summary,
            "n": rep.n(),
            "segments": segments,
            "e": f.e,
            "dims": rep.dims(),
            "bases": bases,
            "grading": grading.to_json(),
            "cocharacter": cochar.to_string(),
            "euler_characteristic": betti.iter().sum::<usize>(),
            "betti": betti,
        });
        return Ok(serde_json::to_string_pretty(&v)? + "\n");
    }
    let mut s = String::new();
    s += &format!("name         {}\n", f.name);
    s += &format!("summary      {}\n", f.summary);
    s += &format!("cycle        n = {}\n", rep.n());
    s += &format!("segments     {}\n", segments.join(" "));
    s += &format!("e            {}\n", join(&f.e));
    s += &format!("dims         {}\n", join(&rep.dims()));
    for (i, b) in bases.iter().enumerate() {
        let w: Vec<String> = grading.wt[i].iter().map(|w| w.to_string()).collect();
        s += &format!("B^({})        {}  wt {}\n", i + 1, b.join(" "), w.join(" "));
    }
    s += &format!("cocharacter  {cochar}\n");
    s += &format!("points       {}\n", betti.iter().sum::<usize>());
    s += &format!("betti        {}\n", join(&betti));
    Ok(s)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn fixed_points(f: &Fixture, format: Format) -> anyhow::Result<String> {
    let q = f.quiver()?;
    let g = f.graph()?;
    let rows: Vec<_> = g
        .vertices
        .iter()
        .map(|v| (v, terminal_triples(&q, &v.point).iter().map(|t| t.to_string()).collect::<Vec<_>>()))
        .collect();
    if format == Format::Json {
        let v: Vec<_> = rows
            .iter()
            .map(|(v, t)| json!({"pos": v.pos, "tails": v.point.tails, "dim": v.dim, "triples": t}))
            .collect();
        return Ok(serde_json::to_string_pretty(&v)? + "\n");
    }
    Ok(rows.iter().map(|(v, t)| format!("p{}\t{}\tdim {}\t{}\n", v.pos, v.point, v.dim, t.join(" "))).collect())
}

fn moment_graph(f: &Fixture, format: Format, delta_free: bool) -> anyhow::Result<String> {
    let mut g = f.graph()?;
    if delta_free {
        g = project_delta(&g);
    }
    Ok(match format {
        Format::Json => export_graph(&g, GraphFormat::Json)? + "\n",
        Format::Dot => export_graph(&g, GraphFormat::Dot)?,
        Format::Table => {
            let mut s: String = g.vertices.iter().map(|v| format!("p{}\t{}\tdim {}\n", v.pos, v.point, v.dim)).collect();
            for e in &g.edges {
                s += &format!("p{} -> p{}\t{}\n", e.src, e.dst, e.label.to_poly(g.nvars));
            }
            s
        }
    })
}

fn betti(f: &Fixture, format: Format) -> anyhow::Result<String> {
    let b = poincare_polynomial(&f.quiver()?, &f.e)?;
    Ok(match format {
        Format::Json => serde_json::to_string(&b)? + "\n",
        _ => join(&b) + "\n",
    })
}

/// The table given on the command line, else the bundled one, else one
/// derived from the moment graph.
fn euler_table(f: &Fixture, g: &MomentGraph, flow: &[EquivariantClass], path: Option<&PathBuf>) -> anyhow::Result<EulerClassTable> {
    if let Some(path) = path {
        return load_euler_table(path, g.nvars, g.len()).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    if let Some(t) = f.euler_table(g) {
        return Ok(t?);
    }
    Ok(f.compute_euler_table(g, flow)?)
}

fn basis(f: &Fixture, format: Format, cli: &Cli) -> anyhow::Result<String> {
    let g = f.graph()?;
    let flow = flow_up_basis(&g)?;
    let classes = if cli.unique {
        let t = euler_table(f, &g, &flow, cli.euler_table.as_ref())?;
        unique_basis_from(&g, &t, flow)?
    } else {
        flow
    };
    Ok(match format {
        Format::Json => basis_to_json(&classes)? + "\n",
        _ => render_classes(&classes),
    })
}

fn render_classes(classes: &[EquivariantClass]) -> String {
    let mut s = String::new();
    for (k, c) in classes.iter().enumerate() {
        s += &format!("theta{}\n", k + 1);
        for (j, v) in c.values().iter().enumerate() {
            s += &format!("  p{}\t{}\n", j + 1, v);
        }
    }
    s
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub max_degree: u32,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_degree: 4, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    /// Not applicable to this input.
    Skip(String),
}

/// One line per check.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<(String, Status)>,
}

impl Report {
    pub fn ok(&self) -> bool {
        !self.checks.iter().any(|(_, s)| matches!(s, Status::Fail(_)))
    }

    fn push(&mut self, name: &str, r: Result<(), String>) {
        let status = match r {
            Ok(()) => Status::Pass,
            Err(e) => Status::Fail(e),
        };
        self.checks.push((name.to_string(), status));
    }

    fn skip(&mut self, name: &str, why: String) {
        self.checks.push((name.to_string(), Status::Skip(why)));
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        if format == Format::Json {
            let v: Vec<_> = self
                .checks
                .iter()
                .map(|(n, s)| match s {
                    Status::Pass => json!({"check": n, "status": "ok"}),
                    Status::Fail(e) => json!({"check": n, "status": "fail", "detail": e}),
                    Status::Skip(e) => json!({"check": n, "status": "skip", "detail": e}),
                })
                .collect();
            return Ok(serde_json::to_string_pretty(&v)? + "\n");
        }
        let mut out = String::new();
        for (n, s) in &self.checks {
            match s {
                Status::Pass => out += &format!("ok    {n}\n"),
                Status::Fail(e) => out += &format!("FAIL  {n}: {e}\n"),
                Status::Skip(e) => out += &format!("skip  {n}: {e}\n"),
            }
        }
        Ok(out)
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every invariant that applies to `f`, plus agreement with its golden data.
pub fn verify(f: &Fixture, opts: &VerifyOptions) -> Report {
    let mut r = Report::default();
    let q = match f.quiver() {
        Ok(q) => q,
        Err(e) => {
            r.push("coefficient quiver", Err(e.to_string()));
            return r;
        }
    };
    r.push("coefficient quiver", q.check().map_err(|e| e.to_string()));
    r.push("attractive grading", check(verify_attractive(&q, &attractive_grading(&q)), || "weights violate the grading rules".into()));

    let g = match f.graph() {
        Ok(g) => g,
        Err(e) => {
            r.push("moment graph", Err(e.to_string()));
            return r;
        }
    };
    r.push("terminal triples = out-degree", {
        let bad = g.vertices.iter().find(|v| terminal_triples(&q, &v.point).len() != g.out_degree(v.pos));
        check(bad.is_none(), || format!("at p{}", bad.map_or(0, |v| v.pos)))
    });
    r.push("orbit representatives", orbit_check(&q, &g, &f.e));
    if let Some(golden) = f.golden_graph() {
        r.push("golden moment graph", match golden {
            Ok(h) => check(h == g, || "differs from the computed graph".into()),
            Err(e) => Err(e.to_string()),
        });
    }

    let flow = match flow_up_basis(&g) {
        Ok(b) => b,
        Err(e) => {
            r.push("flow-up basis", Err(e.to_string()));
            return r;
        }
    };
    r.push("flow-up basis", flow_check(&g, &flow));
    r.push(&format!("freeness up to degree {}", opts.max_degree), freeness(&g, opts.max_degree));

    let table = match f.euler_table(&g) {
        Some(t) => t,
        None => match f.compute_euler_table(&g, &flow) {
            Err(Error::MissingEulerData(why)) => {
                r.skip("Euler class table", why);
                return r;
            }
            t => t,
        },
    };
    let table = table.and_then(|t| t.validate(&g, &flow).map(|()| t)).map_err(|e| e.to_string());
    r.push("Euler class table", table.as_ref().map(|_| ()).map_err(Clone::clone));
    let Ok(table) = table else { return r };
    if f.euler_table.is_some() {
        let fresh = f.compute_euler_table(&g, &flow).map_err(|e| e.to_string());
        r.push("golden Euler table", fresh.and_then(|t| check(t.to_json() == table.to_json(), || "differs from the recomputed table".into())));
    }

    let basis = match unique_basis_from(&g, &table, flow) {
        Ok(b) => b,
        Err(e) => {
            r.push("unique basis", Err(e.to_string()));
            return r;
        }
    };
    r.push("unique basis", unique_check(&g, &table, &basis));
    if let Some(golden) = f.golden_basis(&g) {
        r.push("golden basis", match golden {
            Ok(h) => {
                let gkm = h.iter().all(|c| gkm_check(&g, c).is_empty());
                check(gkm && h == basis, || "differs from the computed basis".into())
            }
            Err(e) => Err(e.to_string()),
        });
    }
    r.push("structure constants", products_check(&basis, opts.seed));
    r
}

fn orbit_check(q: &gkm_cycle::rep::CoefficientQuiver, g: &MomentGraph, e: &[usize]) -> Result<(), String> {
    for v in &g.vertices {
        for t in terminal_triples(q, &v.point) {
            let u = orbit_representative(q, &v.point, t).map_err(|e| e.to_string())?;
            if !check_subrepresentation(q, e, &u).map_err(|e| e.to_string())? {
                return Err(format!("triple {t} at p{}", v.pos));
            }
        }
    }
    Ok(())
}

fn flow_check(g: &MomentGraph, flow: &[EquivariantClass]) -> Result<(), String> {
    for (k, f) in flow.iter().enumerate() {
        let i = k + 1;
        check(gkm_check(g, f).is_empty(), || format!("class {i} violates the congruences"))?;
        let triangular = (1..i).all(|j| f.at(j).is_zero()) && !f.at(i).is_zero();
        check(triangular, || format!("class {i} is not triangular"))?;
        check(f.homogeneous_degree() == Some(g.vertex(i).dim as u32), || format!("class {i} has the wrong degree"))?;
    }
    Ok(())
}

fn freeness(g: &MomentGraph, d_max: u32) -> Result<(), String> {
    if freeness_check(g, d_max) {
        return Ok(());
    }
    let d = (0..=d_max).find(|&d| graded_rank(g, d) != gkm_cycle::cohomology::expected_rank(g, d));
    Err(format!("graded rank differs from the free count in degree {}", d.unwrap_or(0)))
}

fn unique_check(g: &MomentGraph, t: &EulerClassTable, basis: &[EquivariantClass]) -> Result<(), String> {
    for (k, th) in basis.iter().enumerate() {
        let i = k + 1;
        check(gkm_check(g, th).is_empty(), || format!("class {i} violates the congruences"))?;
        let idx = local_indices(th, t).map_err(|e| e.to_string())?;
        for (j, v) in idx.iter().enumerate() {
            let want = Polynomial::from_int(g.nvars, i64::from(j + 1 == i));
            check(*v == want, || format!("I_{}(theta{i}) = {v}", j + 1))?;
        }
    }
    Ok(())
}

/// Exact expansion of every product, then a numeric re-check at random
/// integer points.
fn products_check(basis: &[EquivariantClass], seed: u64) -> Result<(), String> {
    let sc = structure_constants(basis).map_err(|e| e.to_string())?;
    let Some(first) = basis.first() else { return Ok(()) };
    let nvars = first.at(1).nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let x: Vec<Rational> = (0..nvars).map(|_| rat(rng.random_range(-100..=100))).collect();
        let ev = |p: &Polynomial| p.evaluate(&x).map_err(|e| e.to_string());
        for (&(i, j), c) in &sc {
            for pos in 1..=basis.len() {
                let lhs = ev(basis[i - 1].at(pos))? * ev(basis[j - 1].at(pos))?;
                let mut rhs = rat(0);
                for (k, ck) in c.iter().enumerate() {
                    rhs += ev(ck)? * ev(basis[k].at(pos))?;
                }
                check(lhs == rhs, || format!("theta{i}*theta{j} at p{pos}"))?;
            }
        }
    }
    Ok(())
}

/// Entry point for `main`.
pub fn main_exit() -> ! {
    std::process::exit(run(std::env::args_os()))
}
