//! `vwframe`: command line front end for the vwcore pipelines.
//!
//! Exit codes: 0 success or verification pass, 1 verification failure,
//! 2 usage error, 3 input or IO error, 4 computation error.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use vwcore::algebra::{FramingImage, SubstitutionSpec};
use vwcore::nekrasov::NekrasovSeries;
use vwcore::report::{format_series, format_yfraction_y, VerificationReport};
use vwcore::{blowup, cache, direct, modular, nekrasov, toric, universal, vw, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 3;
const EXIT_COMPUTE: u8 = 4;

#[derive(Parser)]
#[command(name = "vwframe", version, about = "Exact Nekrasov, blow-up and universal Vafa-Witten series")]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Persistent series cache.
    #[arg(long, global = true, env = "VWFRAME_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Substituted Nekrasov series, coefficientwise in u = s − 1.
    Nekrasov {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        order: usize,
        /// `standard` (e_i = y^-i) or comma-separated `s:k` per framing
        /// parameter, meaning e_i ↦ s^s y^(k/2).
        #[arg(long, default_value = "standard")]
        ei_spec: String,
        /// Direction `a,b` for t_i ↦ s^a, s^b; resampled when omitted.
        #[arg(long, value_parser = parse_pair)]
        direction: Option<[i64; 2]>,
    },
    /// Lattice theta function of A_{r-1} shifted by ell.
    Theta {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long)]
        order: usize,
    },
    /// Extract the universal series and write them as JSON.
    Extract {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one identity check.
    Verify {
        #[command(subcommand)]
        identity: Identity,
    },
    /// Vertical partition function of a surface given as JSON.
    Vw {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Overrides the surface's c1, as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<String>,
        #[arg(long)]
        order: usize,
        /// Rank 2 only: use the theta/eta closed forms instead of extraction.
        #[arg(long)]
        closed_form: bool,
    },
}

#[derive(Args, Clone)]
struct RankOrder {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    order: usize,
}

#[derive(Subcommand)]
enum Identity {
    /// Framing permutation symmetry at seeded rational points.
    Permutation {
        #[command(flatten)]
        ro: RankOrder,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Framing inversion symmetry at seeded rational points.
    Inversion {
        #[command(flatten)]
        ro: RankOrder,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Blow-up formula at e_i = y^-i.
    Klt {
        #[command(flatten)]
        ro: RankOrder,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
    },
    /// Product form of Abar and the Jacobi-form expression of A.
    AFormula(RankOrder),
    /// Ebar_i = Ebar_{r-i} and Ebar_ij = Ebar_{r-j,r-i}.
    SymmetryRelations(RankOrder),
    /// Congruence sums of C_I^{-1} against theta/eta, and their DFT form.
    BlowupRelations {
        #[command(flatten)]
        ro: RankOrder,
        #[arg(long, default_value_t = 2)]
        eps_order: usize,
    },
    /// Direct vertical route against the Nekrasov route.
    RouteEquality(RankOrder),
    /// Extraction reproduces every configuration.
    Universality(RankOrder),
    /// Rank-2 corollary assembled against closed forms.
    Corollary {
        #[arg(long)]
        order: usize,
    },
}

fn parse_vec(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"))).collect()
}

fn parse_pair(s: &str) -> Result<[i64; 2], String> {
    let v = parse_vec(s)?;
    <[i64; 2]>::try_from(v).map_err(|_| "expected two integers a,b".to_string())
}

fn parse_framing(s: &str, r: usize) -> Result<Option<Vec<FramingImage>>, Error> {
    if s == "standard" {
        return Ok(None);
    }
    let v: Vec<FramingImage> = s
        .split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| Error::Parse(format!("framing entry {p:?} is not s:k")))?;
            let a = a.trim().parse().map_err(|e| Error::Parse(format!("{a:?}: {e}")))?;
            let b = b.trim().parse().map_err(|e| Error::Parse(format!("{b:?}: {e}")))?;
            Ok(FramingImage { s: a, y: b })
        })
        .collect::<Result<_, Error>>()?;
    if v.len() != r {
        return Err(Error::Parse(format!("{} framing entries for rank {}", v.len(), r)));
    }
    Ok(Some(v))
}

/// What a command produced.
enum Outcome {
    Text(String, serde_json::Value),
    Report(VerificationReport),
}

fn nekrasov_text(s: &NekrasovSeries) -> (String, serde_json::Value) {
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for (e, c) in s.terms() {
        let (lo, hi) = c.window();
        let coeffs: Vec<(i64, String)> = c.stored().filter(|(_, x)| !vwcore::algebra::Ring::is_zero(*x)).map(|(k, x)| (k, format_yfraction_y(&x.to_yfraction()))).collect();
        lines.push(format!("q^{e}: exact on u^[{lo}..{hi}]"));
        for (k, x) in &coeffs {
            lines.push(format!("  u^{k}: {x}"));
        }
        rows.push(json!({"q": e.to_string(), "u_window": [lo, hi], "coefficients": coeffs}));
    }
    (lines.join("\n"), json!(rows))
}

fn series_json(s: &modular::YSeries) -> serde_json::Value {
    json!({
        "order": s.order().map(|o| o.to_string()),
        "terms": s.terms().map(|(e, c)| (e.to_string(), format_yfraction_y(c))).collect::<Vec<_>>(),
    })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Nekrasov { rank, order, ei_spec, direction } => {
            let framing = parse_framing(ei_spec, *rank)?;
            let build = |alpha: [i64; 2]| -> Result<SubstitutionSpec, Error> {
                match &framing {
                    None => Ok(SubstitutionSpec::standard(*rank, alpha)),
                    Some(f) => SubstitutionSpec::new(alpha, f.clone()),
                }
            };
            let (alpha, s) = match direction {
                Some(a) => (*a, nekrasov::nekrasov_series(*rank, *order, &build(*a)?)?),
                None => toric::with_direction(*rank, |a| Ok((a, nekrasov::nekrasov_series(*rank, *order, &build(a)?)?)))?,
            };
            let (text, v) = nekrasov_text(&s);
            Ok(Outcome::Text(format!("direction {alpha:?}\n{text}"), json!({"direction": alpha, "series": v})))
        }
        Command::Theta { rank, ell, order } => {
            let s = modular::theta_lattice(*rank, *ell, *order);
            Ok(Outcome::Text(format_series(&s), series_json(&s)))
        }
        Command::Extract { rank, order, out } => {
            let u = universal::extract(*rank, *order)?;
            let exported = u.export();
            std::fs::write(out, serde_json::to_string_pretty(&exported).map_err(|e| Error::Parse(e.to_string()))?)?;
            let mut text = format!("{} configurations, digest {}\n", u.configurations, u.digest);
            for (name, s) in u.named() {
                text.push_str(&format!("{name} = {}\n", format_series(s)));
            }
            text.push_str(&format!("written to {}", out.display()));
            Ok(Outcome::Text(text, serde_json::to_value(&exported).map_err(|e| Error::Parse(e.to_string()))?))
        }
        Command::Verify { identity } => verify(identity, cli.seed).map(Outcome::Report),
        Command::Vw { surface, rank, c1, order, closed_form } => {
            let text = std::fs::read_to_string(surface)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", surface.display()))))?;
            let mut s = vw::SurfaceInput::from_json(&text)?;
            if let Some(c) = c1 {
                s.c1 = parse_vec(c).map_err(|e| Error::Parse(format!("--c1: {e}")))?;
                s.validate()?;
            }
            let z = if *closed_form {
                if *rank != 2 {
                    return Err(Error::Unsupported("closed forms exist for rank 2 only".into()));
                }
                let u = vw::rank2_closed_form_series(vw::required_series_order(&s, 2, *order))?;
                vw::vertical_partition_function(&s, 2, *order, &u)?
            } else {
                vw::vertical_partition_function_auto(&s, *rank, *order)?
            };
            Ok(Outcome::Text(format_series(&z), series_json(&z)))
        }
    }
}

fn symmetry_report(rep: nekrasov::SymmetryReport) -> VerificationReport {
    let mut out = VerificationReport::new(&rep.identity, &[("r", rep.r.to_string()), ("n", rep.n.to_string()), ("seed", rep.seed.to_string())]);
    for c in &rep.comparisons {
        out.push_bool(format!("trial {} {}", c.trial, c.transform), c.pass, || vwcore::report::Divergence {
            q_exponent: rep.n.to_string(),
            difference: format!("{} vs {}", c.lhs, c.rhs),
        });
    }
    out
}

fn verify(id: &Identity, seed: u64) -> Result<VerificationReport, Error> {
    Ok(match id {
        Identity::Permutation { ro, trials } => symmetry_report(nekrasov::verify_framing_permutation(ro.rank, ro.order, *trials, seed)?),
        Identity::Inversion { ro, trials } => symmetry_report(nekrasov::verify_framing_inversion(ro.rank, ro.order, *trials, seed)?),
        Identity::Klt { ro, ell } => blowup::verify_klt(ro.rank, *ell, ro.order)?,
        Identity::AFormula(ro) => universal::verify_a_closed_form(&universal::extract(ro.rank, ro.order)?, ro.order)?,
        Identity::SymmetryRelations(ro) => universal::verify_symmetry_relations(&universal::extract(ro.rank, ro.order)?, ro.order),
        Identity::BlowupRelations { ro, eps_order } => {
            let u = universal::extract(ro.rank, ro.order.max(*eps_order))?;
            universal::verify_blowup_relations(&u, ro.order, *eps_order)?
        }
        Identity::RouteEquality(ro) => direct::verify_route_equality(ro.rank, ro.order)?,
        Identity::Universality(ro) => {
            let configs = universal::build_configurations(ro.rank)?;
            let u = universal::extract_with(ro.rank, ro.order, &configs)?;
            universal::verify_universality(&u, &configs, ro.order)?
        }
        Identity::Corollary { order } => vw::verify_rank2_corollary(&vw::corollary_surfaces(), *order)?,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse(_) | Error::InvalidSurface(_) | Error::InvalidSubstitution(_) => EXIT_INPUT,
        _ => EXIT_COMPUTE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = &cli.cache_dir {
        if let Err(e) = cache::configure(Some(dir)) {
            eprintln!("warning: cache disabled ({e})");
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("elapsed {elapsed:.3}s");
    if let Some((hits, misses, corrupt, writes)) = cache::global_stats() {
        eprintln!("cache: {hits} hits, {misses} misses, {corrupt} corrupt, {writes} writes");
    }
    match result {
        Ok(Outcome::Text(text, value)) => {
            if cli.json {
                println!("{}", json!({"result": value, "elapsed_s": elapsed}));
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(rep)) => {
            if cli.json {
                println!("{}", json!({"report": rep, "elapsed_s": elapsed}));
            } else {
                print!("{rep}");
            }
            if rep.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
