//! Command-line front end. [`run`] returns the process exit code: 0 when
//! every check passed, 1 when a check failed, 2 for usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::engines::{count_brute_bounded, count_kasteleyn, count_lgv, DEFAULT_MAX_VERTICES};
use crate::error::{Error, Result};
use crate::formulas::{
    check_eq9, check_krattenthaler_random, closed_form, count_graph, label_lists, sweep_specs, verify_identity,
    verify_sweep, IdentityParams, IDENTITY_TAGS,
};
use crate::graphs::{dual_graph, symmetry_cut, MatchGraph};
use crate::numeric::{fmt_rational, parse_rational, pow2, Rational};
use crate::regions::{build_region, RegionSpec};
use crate::render::{render_ascii, render_svg, sample_tiling};
use crate::rewrites::{parse_script, replay_script};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Parser, Debug)]
#[command(name = "aztec-quarters", version, about = "Exact tiling counts for quartered Aztec and hexagonal regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count tilings (perfect matchings) of a region.
    Count {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_enum, default_value = "all")]
        engine: Engine,
        /// Vertex bound for the brute-force engine.
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
    /// Compare closed forms with graph counts over a parameter sweep.
    Verify {
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        /// Allow kmax > 3 or nmax > 8.
        #[arg(long)]
        force: bool,
    },
    /// Check a named identity.
    Identity {
        #[arg(long)]
        name: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Comma-separated labels; omit to run every valid list.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of random instances (krattenthaler).
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Largest matrix size (krattenthaler).
        #[arg(long, default_value_t = 5)]
        nmax: usize,
    },
    /// Draw a region.
    Render {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        /// Overlay one tiling found by the brute-force engine.
        #[arg(long)]
        tiling: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a rewrite script on a graph dump.
    Rewrite {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        script: PathBuf,
        /// Write the final graph dump here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the dual graph of a region in dump format.
    Dump {
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Cut a mirror-symmetric graph dump along the vertical line x = AXIS.
    Cut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        axis: String,
    },
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// JSON spec file `{"family": ..., "params": {...}}`.
    #[arg(long, conflicts_with = "family")]
    spec: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated labels (a single integer for SH).
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Brute,
    Kasteleyn,
    Lgv,
    Formula,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Ascii,
}

fn parse_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad list entry {t:?}"))))
        .collect()
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

impl RegionArgs {
    fn spec(&self) -> Result<RegionSpec> {
        if let Some(path) = &self.spec {
            let text = read(path)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: e.line(),
                msg: e.to_string(),
            })?;
            return RegionSpec::from_json(&v);
        }
        let family = self.family.as_deref().ok_or_else(|| Error::Invalid("give --family or --spec".into()))?;
        let mut p = Map::new();
        if let Some(m) = self.m {
            p.insert("m".into(), m.into());
        }
        if let Some(n) = self.n {
            p.insert("n".into(), n.into());
        }
        if let Some(order) = self.order {
            p.insert("order".into(), order.into());
        }
        if let Some(b) = self.b {
            p.insert("b".into(), b.into());
        }
        if let Some(s) = &self.s {
            p.insert("s".into(), json!(parse_list(s)?));
        }
        if let Some(a) = &self.a {
            let list = parse_list(a)?;
            if family == "SH" {
                let [x] = list[..] else {
                    return Err(Error::Invalid("SH takes a single integer --a".into()));
                };
                p.insert("a".into(), x.into());
            } else {
                p.insert("a".into(), json!(list));
            }
        }
        RegionSpec::from_json(&json!({ "family": family, "params": p }))
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                2
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn json_line(out: &mut dyn Write, v: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Count { region, engine, max_vertices } => cmd_count(&region.spec()?, engine, max_vertices, out),
        Command::Verify { kmax, nmax, force } => {
            if !force && (kmax > 3 || nmax > 8) {
                return Err(Error::Invalid("sweep bounds above kmax 3 / nmax 8 need --force".into()));
            }
            let start = std::time::Instant::now();
            let report = verify_sweep(&sweep_specs(kmax, nmax), closed_form)?;
            json_line(out, &report)?;
            writeln!(err, "verify: {} instances in {:.2?}", report.checked, start.elapsed())?;
            Ok(report.pass)
        }
        Command::Identity { name, k, n, a, seed, random, nmax } => cmd_identity(&name, k, n, a, seed, random, nmax, out),
        Command::Render { region, format, tiling, out: path } => {
            let r = build_region(&region.spec()?)?;
            let text = match format {
                Format::Ascii => render_ascii(&r),
                Format::Svg => {
                    let tiles = if tiling { sample_tiling(&r)? } else { None };
                    if tiling && tiles.is_none() {
                        writeln!(err, "note: region has no tiling")?;
                    }
                    render_svg(&r, tiles.as_deref())
                }
            };
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => write!(out, "{text}")?,
            }
            Ok(true)
        }
        Command::Rewrite { graph, script, out: path } => {
            let g = MatchGraph::parse_dump(&read(&graph)?, &graph.display().to_string())?;
            let steps = parse_script(&read(&script)?, &script.display().to_string())?;
            let (h, factor, applied) = replay_script(&g, &steps)?;
            for (i, s) in applied.iter().enumerate() {
                writeln!(out, "step {i} {} {:?} factor {}", s.rule, s.site, fmt_rational(&s.factor))?;
            }
            writeln!(out, "factor {}", fmt_rational(&factor))?;
            let before = count_graph(&g)?;
            let after = count_graph(&h)?;
            let ok = before == &factor * &after;
            writeln!(out, "before {}", fmt_rational(&before))?;
            writeln!(out, "after {}", fmt_rational(&after))?;
            writeln!(out, "relation {}", if ok { "holds" } else { "FAILS" })?;
            if let Some(p) = path {
                std::fs::write(p, h.dump())?;
            }
            Ok(ok)
        }
        Command::Dump { region } => {
            write!(out, "{}", dual_graph(&build_region(&region.spec()?)?).dump())?;
            Ok(true)
        }
        Command::Cut { graph, axis } => {
            let g = MatchGraph::parse_dump(&read(&graph)?, &graph.display().to_string())?;
            let cut = symmetry_cut(&g, &parse_rational(&axis)?)?;
            let whole = count_graph(&g)?;
            let plus = count_graph(&cut.plus)?;
            let minus = count_graph(&cut.minus)?;
            let product = pow2(cut.width as i64) * &plus * &minus;
            let ok = whole == product;
            writeln!(out, "w {}", cut.width)?;
            writeln!(out, "plus {} vertices, M = {}", cut.plus.len(), fmt_rational(&plus))?;
            writeln!(out, "minus {} vertices, M = {}", cut.minus.len(), fmt_rational(&minus))?;
            writeln!(out, "whole M = {}", fmt_rational(&whole))?;
            writeln!(out, "contract {}", if ok { "holds" } else { "FAILS" })?;
            Ok(ok)
        }
    }
}

fn cmd_count(spec: &RegionSpec, engine: Engine, max_vertices: usize, out: &mut dyn Write) -> Result<bool> {
    writeln!(out, "region {spec}")?;
    let graph = || -> Result<MatchGraph> { Ok(dual_graph(&build_region(spec)?)) };
    let lgv = || -> Result<Rational> { Ok(Rational::from_integer(count_lgv(spec)?)) };
    match engine {
        Engine::Brute => writeln!(out, "brute {}", fmt_rational(&count_brute_bounded(&graph()?, max_vertices)?))?,
        Engine::Kasteleyn => writeln!(out, "kasteleyn {}", fmt_rational(&count_kasteleyn(&graph()?)?))?,
        Engine::Lgv => writeln!(out, "lgv {}", fmt_rational(&lgv()?))?,
        Engine::Formula => writeln!(out, "formula {}", fmt_rational(&closed_form(spec)?))?,
        Engine::All => {
            let g = graph()?;
            let mut values: Vec<Rational> = Vec::new();
            let mut report = |name: &str, r: Result<Rational>, out: &mut dyn Write| -> Result<()> {
                match r {
                    Ok(v) => {
                        writeln!(out, "{name} {}", fmt_rational(&v))?;
                        values.push(v);
                    }
                    Err(e) => writeln!(out, "{name} skipped: {e}")?,
                }
                Ok(())
            };
            report("brute", count_brute_bounded(&g, max_vertices), out)?;
            report("kasteleyn", count_kasteleyn(&g), out)?;
            if matches!(spec, RegionSpec::QH { .. }) {
                report("lgv", lgv(), out)?;
            }
            report("formula", closed_form(spec), out)?;
            let agree = values.windows(2).all(|w| w[0] == w[1]);
            writeln!(out, "agree {}", if agree { "yes" } else { "no" })?;
            return Ok(agree);
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_identity(
    name: &str,
    k: Option<u32>,
    n: Option<u32>,
    a: Option<String>,
    seed: u64,
    random: usize,
    nmax: usize,
    out: &mut dyn Write,
) -> Result<bool> {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Error::Invalid(format!("identity {name} needs --{flag}")));
    match name {
        "eq9" => {
            let r = check_eq9(need(n, "n")?)?;
            json_line(out, &r)?;
            Ok(r.pass)
        }
        "krattenthaler" => {
            let r = check_krattenthaler_random(random, nmax, seed)?;
            json_line(out, &r)?;
            Ok(r.pass)
        }
        _ if IDENTITY_TAGS.contains(&name) => {
            let (k, n) = (need(k, "k")?, need(n, "n")?);
            let reports = match a {
                Some(a) => vec![verify_identity(name, &IdentityParams { k, n, a: parse_list(&a)?, seed })?],
                None => {
                    let lists = if name.starts_with("lem10") { vec![Vec::new()] } else { label_lists(n, k as usize) };
                    let mut reports = Vec::new();
                    for a in lists {
                        match verify_identity(name, &IdentityParams { k, n, a, seed }) {
                            Ok(r) => reports.push(r),
                            Err(Error::Invalid(_)) => {}
                            Err(e) => return Err(e),
                        }
                    }
                    if reports.is_empty() {
                        return Err(Error::Invalid(format!("no label list satisfies {name} at k = {k}, n = {n}")));
                    }
                    reports
                }
            };
            let pass = reports.iter().all(|r| r.pass);
            json_line(out, &reports)?;
            Ok(pass)
        }
        _ => Err(Error::Invalid(format!(
            "unknown identity {name:?}; known: eq9, krattenthaler, {}",
            IDENTITY_TAGS.join(", ")
        ))),
    }
}
