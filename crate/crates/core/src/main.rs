//! `scdforge`: build, discretize, check, and render geometric symmetric
//! chain decompositions of rational polytopes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scdforge::conditions::{check_strong, check_weak};
use scdforge::construct::{cone_off, product_discrete, product_geometric, ConeSpec};
use scdforge::discretize::{asymptotic, cover, decompose};
use scdforge::exact::{fmt_rat, parse_rat, Point, Rat};
use scdforge::io as fmtio;
use scdforge::oracle;
use scdforge::render::{render_chains, render_geo, ViewSpec};
use scdforge::volume;
use scdforge::{catalog, Error};

#[derive(Parser)]
#[command(name = "scdforge", version, about = "Geometric symmetric chain decompositions of rational polytopes")]
struct Cli {
    /// Write primary output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for chain decompositions.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Seed for the randomized disjointness probes in validation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for enumeration-heavy subcommands.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List or export the built-in catalog.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
    /// Discretize a catalog entry into a symmetric chain decomposition of P(n).
    Discretize {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: Option<String>,
    },
    /// Covering chains in P(kM) through all points of P(k).
    Cover {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: Option<String>,
    },
    /// Asymptotic decomposition of P(k) with trimming report.
    Asym {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        trim_cap: Option<usize>,
    },
    /// Verify the hyperplane conditions and print the certificate table.
    Check {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        t: Option<String>,
    },
    /// Cone a decomposition of a projected polytope back up at an apex.
    Cone {
        /// Catalog id or a GeoDecomposition JSON file.
        #[arg(long)]
        base: String,
        /// Apex coordinates, e.g. "1/2,1/2".
        #[arg(long)]
        apex: String,
        /// Snake index that owns the apex.
        #[arg(long, default_value_t = 0)]
        owner: usize,
        #[arg(long)]
        t: Option<String>,
    },
    /// Product of two decompositions (geometric) or chain files (discrete).
    Product {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_parser = ["geo", "discrete"])]
        mode: String,
    },
    /// Exact volume statistics and identities.
    Stats {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// Render a decomposition or a chain file to SVG.
    Render {
        #[arg(long)]
        entry: Option<String>,
        #[arg(long)]
        chains: Option<PathBuf>,
        /// Two projection functionals, e.g. "1,0,2;0,1,1/2".
        #[arg(long)]
        view: Option<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// Independent brute-force oracles.
    Oracle {
        #[command(subcommand)]
        sub: OracleCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Print entry ids and provenance.
    List,
    /// Export an entry as GeoDecomposition JSON.
    Export {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        t: Option<String>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Rank histogram of P(n), with the q-binomial cross-check for L(m).
    RankProfile {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: Option<String>,
    },
    /// Exhaustive search for a symmetric chain decomposition of a tiny poset.
    Search {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 60)]
        cap: usize,
        #[arg(long)]
        t: Option<String>,
    },
    /// Verify a chain decomposition file against a catalog polytope.
    Verify {
        #[arg(long)]
        chains: PathBuf,
        #[arg(long)]
        entry: String,
        #[arg(long)]
        t: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.parallel {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnknownEntry(_) | Error::Parse(_) => 2,
        Error::MixedKinds
        | Error::StrongConditionFailed(_)
        | Error::PreconditionFailed(_)
        | Error::BadParameter(_)
        | Error::BreakpointDenominator { .. } => 3,
        _ => 1,
    }
}

fn parse_t(t: &Option<String>) -> Result<Option<Rat>, Error> {
    t.as_ref().map(|s| parse_rat(s)).transpose()
}

fn entry_for(id: &str, t: &Option<String>) -> Result<catalog::CatalogEntry, Error> {
    let t = parse_t(t)?;
    catalog::get(id, t.as_ref())
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => write_atomic(path, text),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Error> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| Error::Parse(format!("write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Parse(format!("rename {}: {e}", path.display())))?;
    Ok(())
}

fn emit_chains(cli: &Cli, d: &scdforge::ChainDecomposition) -> Result<(), Error> {
    let text = match cli.format.as_str() {
        "csv" => fmtio::chains_to_csv(d),
        _ => serde_json::to_string_pretty(&fmtio::chains_to_json(d))
            .map_err(|e| Error::Parse(e.to_string()))?,
    };
    emit(cli, &text)
}

fn load_geo(arg: &str) -> Result<scdforge::GeoDecomposition, Error> {
    if catalog::list().iter().any(|(id, _)| *id == arg) {
        return Ok(catalog::get(arg, None)?.decomposition);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("read {arg}: {e}")))?;
    let json: fmtio::GeoJson = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    fmtio::geo_from_json(&json)
}

fn load_chains(path: &Path) -> Result<scdforge::ChainDecomposition, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("read {}: {e}", path.display())))?;
    let json: fmtio::ChainDecompositionJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    fmtio::chains_from_json(&json)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.cmd {
        Cmd::Catalog { sub } => match sub {
            CatalogCmd::List => {
                let mut text = String::new();
                for (id, what) in catalog::list() {
                    text.push_str(&format!("{id:16} {what}\n"));
                }
                emit(cli, text.trim_end())?;
                Ok(ExitCode::SUCCESS)
            }
            CatalogCmd::Export { entry, t } => {
                let e = entry_for(entry, t)?;
                let text = serde_json::to_string_pretty(&fmtio::geo_to_json(&e.decomposition))
                    .map_err(|er| Error::Parse(er.to_string()))?;
                emit(cli, &text)?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Discretize { entry, n, t } => {
            let e = entry_for(entry, t)?;
            let d = decompose(&e.decomposition, *n)?;
            let report = scdforge::poset::verify_scd(&d, e.polytope())?;
            emit_chains(cli, &d)?;
            if !report.ok() {
                eprintln!("verification failed: {:?}", report.offender);
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cover { entry, k, t } => {
            let e = entry_for(entry, t)?;
            let d = cover(&e.decomposition, *k, e.cover_m_override)?;
            emit_chains(cli, &d)?;
            // Internal verification: disjoint symmetric chains covering P(k).
            let ok = verify_cover(&e, *k, &d)?;
            if !ok {
                eprintln!("cover verification failed");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Asym { entry, k, t, trim_cap } => {
            let e = entry_for(entry, t)?;
            let rep = asymptotic(&e.decomposition, *k, *trim_cap)?;
            eprintln!(
                "kept {} chains / {} points; discarded {}, trimmed {}, total {} (loss {})",
                rep.kept.chains.len(),
                rep.kept.total_points(),
                rep.discarded_points,
                rep.trimmed_points,
                rep.total_points,
                fmt_rat(&rep.loss_fraction()),
            );
            emit_chains(cli, &rep.kept)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { entry, t } => {
            let e = entry_for(entry, t)?;
            let mut all_ok = true;
            let mut text = String::new();
            text.push_str("turning set                              complexity  in    out   strong  weak\n");
            for ctx in &e.certificates {
                let strong = check_strong(ctx)?;
                let weak = check_weak(ctx)?;
                all_ok &= strong.satisfied && weak;
                let eqn = equation_of(&ctx.certificate);
                let dirs = |set: &std::collections::BTreeSet<usize>| {
                    if set.is_empty() {
                        "-".to_string()
                    } else {
                        set.iter().map(|d| axis_name(*d)).collect::<Vec<_>>().join(",")
                    }
                };
                text.push_str(&format!(
                    "{:40}  {:9}  {:4}  {:4}  {:6}  {}\n",
                    eqn,
                    strong.complexity.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                    dirs(&ctx.dirs_in),
                    dirs(&ctx.dirs_out),
                    if strong.satisfied { "yes" } else { "NO" },
                    if weak { "yes" } else { "NO" },
                ));
            }
            emit(cli, text.trim_end())?;
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Cmd::Cone { base, apex, owner, t } => {
            let base_geo = if catalog::list().iter().any(|(id, _)| *id == base.as_str()) {
                entry_for(base, t)?.decomposition
            } else {
                load_geo(base)?
            };
            let coords: Result<Vec<Rat>, Error> = apex.split(',').map(parse_rat).collect();
            let spec = ConeSpec { apex: Point::new(coords?), base: base_geo, apex_owner: *owner };
            let coned = cone_off(&spec)?;
            let report = coned.validate(&[1, 2], cli.seed)?;
            let text = serde_json::to_string_pretty(&fmtio::geo_to_json(&coned))
                .map_err(|er| Error::Parse(er.to_string()))?;
            emit(cli, &text)?;
            if !report.ok() {
                eprintln!("validation failed: {:?}", report);
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Product { a, b, mode } => match mode.as_str() {
            "geo" => {
                let ga = load_geo(a)?;
                let gb = load_geo(b)?;
                let g = product_geometric(&ga, &gb)?;
                let report = g.validate(&[1, 2], cli.seed)?;
                let text = serde_json::to_string_pretty(&fmtio::geo_to_json(&g))
                    .map_err(|er| Error::Parse(er.to_string()))?;
                emit(cli, &text)?;
                if !report.ok() {
                    eprintln!("validation failed: {:?}", report);
                    return Ok(ExitCode::from(1));
                }
                Ok(ExitCode::SUCCESS)
            }
            _ => {
                let da = load_chains(Path::new(a))?;
                let db = load_chains(Path::new(b))?;
                let d = product_discrete(&da, &db)?;
                emit_chains(cli, &d)?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Stats { entry, lambda, t } => {
            let e = entry_for(entry, t)?;
            let g = &e.decomposition;
            let mut text = String::new();
            let vol = volume::polytope_volume(&g.polytope)?;
            text.push_str(&format!("volume(P) = {}\n", fmt_rat(&vol)));
            let total = volume::theorem64_total(g)?;
            text.push_str(&format!(
                "sum over snakes of N(T)·avg chain length = {}  ({})\n",
                fmt_rat(&total),
                if total == vol { "matches volume" } else { "MISMATCH" }
            ));
            let mid = g.polytope.rank()? / scdforge::exact::rat(2);
            let slice = volume::slice_normalized_volume(&g.polytope, &mid, 0)?;
            text.push_str(&format!("middle slice normalized volume = {}\n", fmt_rat(&slice)));
            text.push_str(&format!(
                "sum of starting-set normalized volumes matches: {}\n",
                volume::theorem63_check(g)?
            ));
            if let Some(l) = lambda {
                let l = parse_rat(l)?;
                text.push_str(&format!(
                    "rank-{} slice identities hold: {}\n",
                    fmt_rat(&l),
                    volume::theorem65_66_check(g, &l)?
                ));
            }
            text.push_str(&format!(
                "volume rank symmetry: {}\n",
                volume::volume_rank_symmetry(&g.polytope)?
            ));
            emit(cli, text.trim_end())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Render { entry, chains, view, t } => {
            let view_spec = view.as_ref().map(|s| parse_view(s)).transpose()?;
            let svg = match (entry, chains) {
                (Some(id), None) => {
                    let e = entry_for(id, t)?;
                    render_geo(&e.decomposition, view_spec.as_ref())?
                }
                (None, Some(path)) => {
                    let d = load_chains(path)?;
                    render_chains(&d, None, view_spec.as_ref())?
                }
                _ => return Err(Error::BadParameter("render needs exactly one of --entry/--chains".into())),
            };
            emit(cli, &svg)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { sub } => match sub {
            OracleCmd::RankProfile { entry, n, t } => {
                let e = entry_for(entry, t)?;
                let profile = scdforge::poset::rank_profile(e.polytope(), *n)?;
                let text = serde_json::to_string_pretty(&profile.counts)
                    .map_err(|er| Error::Parse(er.to_string()))?;
                emit(cli, &text)?;
                Ok(ExitCode::SUCCESS)
            }
            OracleCmd::Search { entry, n, budget, cap, t } => {
                let e = entry_for(entry, t)?;
                match oracle::search_scd(e.polytope(), *n, *budget, *cap)? {
                    Some(d) => {
                        emit_chains(cli, &d)?;
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        eprintln!("no symmetric chain decomposition exists");
                        Ok(ExitCode::from(1))
                    }
                }
            }
            OracleCmd::Verify { chains, entry, t } => {
                let e = entry_for(entry, t)?;
                let d = load_chains(chains)?;
                let ok = oracle::independent_verify(&d, e.polytope())?;
                emit(cli, if ok { "ok" } else { "FAILED" })?;
                Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
            }
        },
    }
}

fn verify_cover(
    e: &catalog::CatalogEntry,
    k: u64,
    d: &scdforge::ChainDecomposition,
) -> Result<bool, Error> {
    use std::collections::BTreeSet;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    for chain in &d.chains {
        if !scdforge::poset::is_symmetric_chain(chain, e.polytope())? {
            return Ok(false);
        }
        for p in &chain.points {
            if !seen.insert(p.numerators.clone()) {
                return Ok(false);
            }
        }
    }
    let m = d.denominator / k;
    for p in e.polytope().lattice_points(k)? {
        let scaled: Vec<i64> = p.numerators.iter().map(|x| x * m as i64).collect();
        if !seen.contains(&scaled) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn axis_name(d: usize) -> String {
    const NAMES: [&str; 5] = ["x", "y", "z", "w", "v"];
    NAMES.get(d).map(|s| s.to_string()).unwrap_or_else(|| format!("x{}", d + 1))
}

fn equation_of(h: &scdforge::Hyperplane) -> String {
    let (ints, rhs) = h.scaled_integer();
    let mut out = String::new();
    for (i, c) in ints.iter().enumerate() {
        use num_traits::Zero;
        if c.is_zero() {
            continue;
        }
        let name = axis_name(i);
        let mag = c.magnitude();
        let sign = if c.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(sign);
        }
        if mag != &1u32.into() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&name);
    }
    format!("{out}={}", fmt_rat(&rhs))
}

fn parse_view(s: &str) -> Result<ViewSpec, Error> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 2 {
        return Err(Error::BadParameter("view needs two functionals separated by ';'".into()));
    }
    let row = |p: &str| -> Result<Vec<Rat>, Error> { p.split(',').map(parse_rat).collect() };
    Ok(ViewSpec { rows: [row(parts[0])?, row(parts[1])?] })
}
