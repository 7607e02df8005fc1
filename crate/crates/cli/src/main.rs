use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use chambers::apartments::{realize_convex_subcomplex, RealizationCertificate};
use chambers::building::{Chamber, SimplexRef, SubComplex};
use chambers::coxeter::{CoxeterSystem, WeylElement};
use chambers::verify::{self, Failure, Suite, VerificationReport, Witness};

mod dot;
mod load;

#[derive(Parser, Debug)]
#[command(
    name = "chambers",
    version,
    about = "Apartments, convex subcomplexes and verification suites for finite buildings"
)]
struct Cli {
    /// Where built buildings and apartment lists are cached.
    #[arg(
        long,
        env = "CHAMBERS_CACHE_DIR",
        default_value = ".chambers-cache",
        global = true
    )]
    cache_dir: PathBuf,

    /// Worker threads for the parallel suites.
    #[arg(long, env = "CHAMBERS_JOBS", default_value_t = 1, global = true)]
    jobs: usize,

    #[arg(long, env = "CHAMBERS_FORMAT", value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and validate a building, store it under its content hash.
    Build {
        /// `pg2:3`, `gq22`, `rank1:4`, `file:<incidence file>`, or a JSON spec file.
        #[arg(long, env = "CHAMBERS_SPEC")]
        spec: String,
    },
    /// Convex hull of chambers of a Coxeter complex.
    Hull {
        #[arg(long, env = "CHAMBERS_SYSTEM")]
        system: String,
        /// Elements as dot-separated generator words, `e` for the identity,
        /// e.g. `0.1 2.1.0 e`.
        #[arg(long, env = "CHAMBERS_ELEMENTS", num_args = 1.., value_delimiter = ' ')]
        elements: Vec<String>,
    },
    /// Realize a convex subcomplex of an apartment as an intersection of two apartments.
    Realize {
        #[arg(long, env = "CHAMBERS_BUILDING")]
        building: String,
        /// Index into the sorted list of apartments.
        #[arg(long, env = "CHAMBERS_APARTMENT")]
        apartment: usize,
        /// JSON list of simplices `{"cotype": .., "least": ..}`; faces are added.
        #[arg(long, env = "CHAMBERS_SUBCOMPLEX")]
        subcomplex: PathBuf,
        /// Write the certificate here instead of stdout.
        #[arg(long, env = "CHAMBERS_CERTIFICATE")]
        certificate: Option<PathBuf>,
    },
    /// Run a verification suite. Exit status 0 iff it passes.
    Verify {
        #[arg(long, env = "CHAMBERS_SUITE")]
        suite: Option<String>,
        #[arg(long, env = "CHAMBERS_BUILDING")]
        building: Option<String>,
        /// Coxeter system for the condition (IV) scan.
        #[arg(long, env = "CHAMBERS_SYSTEM")]
        system: Option<String>,
        /// Triple and witness radii, `a,b`.
        #[arg(long, env = "CHAMBERS_RADII", default_value = "4,8")]
        radii: String,
        /// Chamber map (JSON list) for the apartment_map suite; identity by default.
        #[arg(long, env = "CHAMBERS_MAP")]
        map: Option<PathBuf>,
        /// Re-validate a realization certificate instead of running a suite.
        #[arg(long, env = "CHAMBERS_CERTIFICATE")]
        certificate: Option<PathBuf>,
        #[arg(long, env = "CHAMBERS_REPORT")]
        report: Option<PathBuf>,
    },
    /// Condition (IV) scan: triples of a ball against pairs of a larger ball.
    Scan {
        #[arg(long, env = "CHAMBERS_SYSTEM")]
        system: String,
        #[arg(long, env = "CHAMBERS_RADII", default_value = "4,8")]
        radii: String,
        #[arg(long, env = "CHAMBERS_REPORT")]
        report: Option<PathBuf>,
    },
    /// Chamber graph in DOT, colouring host, witness and target.
    ExportDot {
        #[arg(long, env = "CHAMBERS_BUILDING")]
        building: String,
        #[arg(long, env = "CHAMBERS_APARTMENT")]
        apartment: Option<usize>,
        #[arg(long, env = "CHAMBERS_CERTIFICATE")]
        certificate: Option<PathBuf>,
        #[arg(long, env = "CHAMBERS_OUT")]
        out: Option<PathBuf>,
    },
}

/// Exit status for a failed suite.
const FAILED: u8 = 1;
/// Exit status for errors.
const ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let code = err
                .downcast_ref::<chambers::Error>()
                .map(|e| e.code())
                .unwrap_or("usage");
            eprintln!("error[{code}]: {err:#}");
            ExitCode::from(ERROR)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if cli.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
        .context("configuring the thread pool")?;
    let cache = cli.cache_dir.as_path();
    match cli.command {
        Command::Build { spec } => {
            let (b, hash, hit) = load::build_into_cache(&spec, cache)?;
            let summary = serde_json::json!({
                "hash": hash,
                "chambers": b.chamber_count(),
                "rank": b.rank(),
                "min_thickness": b.min_thickness(),
                "path": load::artifact_path(cache, &hash),
                "cached": hit,
            });
            emit(
                cli.format,
                &summary,
                &format!("{hash} ({} chambers)", b.chamber_count()),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Hull { system, elements } => {
            let sys = parse_system(&system)?;
            let elems: Vec<WeylElement> = elements
                .iter()
                .filter(|w| !w.is_empty())
                .map(|w| parse_element(&sys, w))
                .collect::<anyhow::Result<_>>()?;
            if elems.is_empty() {
                bail!("--elements is empty");
            }
            let hull = sys.convex_hull(&elems)?;
            let words: Vec<Vec<u8>> = hull.iter().map(|w| w.word().to_vec()).collect();
            let text = hull
                .iter()
                .map(format_element)
                .collect::<Vec<_>>()
                .join(" ");
            emit(cli.format, &words, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize {
            building,
            apartment,
            subcomplex,
            certificate,
        } => {
            let b = load::building(&building, cache)?;
            let aps = b.apartments_cached(cache)?;
            let sigma = aps.get(apartment).with_context(|| {
                format!("apartment {apartment} out of range (0..{})", aps.len())
            })?;
            let text = std::fs::read_to_string(&subcomplex)
                .with_context(|| format!("reading {}", subcomplex.display()))?;
            let simplices: Vec<SimplexRef> =
                serde_json::from_str(&text).context("parsing the subcomplex")?;
            for a in &simplices {
                b.check_chamber(a.least)?;
                if b.face(a.least, a.cotype) != *a {
                    bail!("{a:?} is not a simplex in normal form");
                }
            }
            let kappa = SubComplex::face_closure(&b, &simplices);
            let cert = realize_convex_subcomplex(&b, sigma, &kappa)?;
            let json = serde_json::to_string_pretty(&cert)?;
            match certificate {
                Some(path) => write_atomic(&path, &json)?,
                None => println!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            building,
            system,
            radii,
            map,
            certificate,
            report,
        } => {
            let r = if let Some(path) = certificate {
                let spec = building.context("--certificate needs --building")?;
                let b = load::building(&spec, cache)?;
                check_certificate(&b, &path)?
            } else {
                let suite: Suite = suite
                    .context("--suite or --certificate is required")?
                    .parse()?;
                run_suite(
                    suite,
                    building.as_deref(),
                    system.as_deref(),
                    &radii,
                    map.as_deref(),
                    cache,
                )?
            };
            finish_report(cli.format, &r, report.as_deref())
        }
        Command::Scan {
            system,
            radii,
            report,
        } => {
            let sys = parse_system(&system)?;
            let (a, w) = parse_radii(&radii)?;
            let r = verify::scan_condition_iv(&sys, a, w)?;
            finish_report(cli.format, &r, report.as_deref())
        }
        Command::ExportDot {
            building,
            apartment,
            certificate,
            out,
        } => {
            let b = load::building(&building, cache)?;
            let text = match (apartment, certificate) {
                (_, Some(path)) => {
                    let cert: RealizationCertificate =
                        serde_json::from_str(&std::fs::read_to_string(&path)?)?;
                    cert.validate(&b)?;
                    dot::certificate(&b, &cert)
                }
                (Some(i), None) => {
                    let aps = b.apartments_cached(cache)?;
                    let ap = aps
                        .get(i)
                        .with_context(|| format!("apartment {i} out of range"))?;
                    dot::apartment(&b, ap)
                }
                (None, None) => dot::building(&b),
            };
            match out {
                Some(path) => write_atomic(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_suite(
    suite: Suite,
    building: Option<&str>,
    system: Option<&str>,
    radii: &str,
    map: Option<&Path>,
    cache: &Path,
) -> anyhow::Result<VerificationReport> {
    if suite == Suite::ConditionIv {
        let sys = parse_system(system.context("condition_iv needs --system")?)?;
        let (a, w) = parse_radii(radii)?;
        return Ok(verify::scan_condition_iv(&sys, a, w)?);
    }
    let b = load::building(building.context("this suite needs --building")?, cache)?;
    let aps = b.apartments_cached(cache)?;
    Ok(match suite {
        Suite::Theorem1 => verify::verify_theorem1(&b)?,
        Suite::Thickness3Obstruction => verify::verify_thickness3_obstruction(&b),
        Suite::ChamberSubcomplexes => verify::verify_chamber_subcomplexes(&b)?,
        Suite::GlueRoots => verify::verify_glue_roots(&b),
        Suite::AdjacentPairs => verify::verify_adjacent_pairs(&b, &aps),
        Suite::ApartmentMap => {
            let phi: Vec<Chamber> = match map {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
                    .context("parsing the chamber map")?,
                None => b.chambers().collect(),
            };
            verify::verify_apartment_map(&b, &b, &aps, &aps, &phi)?
        }
        Suite::BuildingAxioms => verify::verify_building_axioms(&b),
        Suite::ProjectionGates => verify::verify_projection_gates(&b),
        Suite::ApartmentTest => verify::verify_apartment_test(&b),
        Suite::ConditionIv => unreachable!("handled above"),
    })
}

/// One-instance report for a stored certificate.
fn check_certificate(
    b: &chambers::building::Building,
    path: &Path,
) -> anyhow::Result<VerificationReport> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert: RealizationCertificate =
        serde_json::from_str(&text).context("parsing the certificate")?;
    let mut report: VerificationReport = serde_json::from_value(serde_json::json!({
        "schema": verify::REPORT_SCHEMA,
        "suite": Suite::Theorem1,
        "building": chambers::building::content_hash(b),
        "instances": 1,
        "failures": [],
    }))?;
    if let Err(e) = cert.validate(b) {
        report.failures.push(Failure {
            witness: Witness::Realization {
                host: cert.host,
                target: cert.target,
            },
            message: e.to_string(),
        });
    }
    Ok(report)
}

fn finish_report(
    format: Format,
    r: &VerificationReport,
    path: Option<&Path>,
) -> anyhow::Result<ExitCode> {
    match path {
        Some(p) => {
            write_atomic(p, &r.to_json())?;
            eprintln!("{}", r.summary());
        }
        None => emit(format, r, &r.summary())?,
    }
    Ok(if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILED)
    })
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: &str) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => println!("{text}"),
        Format::Dot => bail!("--format dot is only meaningful for export-dot"),
    }
    Ok(())
}

fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn parse_system(name: &str) -> anyhow::Result<CoxeterSystem> {
    CoxeterSystem::named(name).with_context(|| format!("unknown Coxeter system {name:?}"))
}

fn parse_radii(text: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = text
        .split_once(',')
        .with_context(|| format!("radii {text:?} should look like `4,8`"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_element(sys: &CoxeterSystem, text: &str) -> anyhow::Result<WeylElement> {
    if text == "e" {
        return Ok(sys.identity());
    }
    let word: Vec<usize> = text
        .split('.')
        .map(|s| {
            s.parse::<usize>()
                .with_context(|| format!("bad generator {s:?} in {text:?}"))
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(sys.normal_form(&word)?)
}

fn format_element(w: &WeylElement) -> String {
    if w.is_identity() {
        "e".into()
    } else {
        w.word()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}
