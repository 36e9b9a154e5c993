//! `frd`: radiomic feature extraction and image-set distribution distances.
//!
//! Subcommands: `extract`, `distance`, `ood {detect,dataset,classify}`,
//! `interpret`, `corrupt`, `catalog`. JSON results go to stdout, logs to
//! stderr. Exit codes: 0 success, 1 usage error, 2 data error. All numeric
//! output is deterministic for fixed inputs, configuration and seed;
//! `--workers` only changes wall time.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::Config;
use frd_core::corruptions::{self, CorruptionKind, CorruptionSpec};
use frd_core::imageio;
use frd_core::interpret::{self, NormalizationRef};
use frd_core::metrics::{self, Bandwidth, DEFAULT_EPSILON};
use frd_core::ood;
use frd_core::radiomics::{self, FeatureCatalog, FeatureFamily, FeatureMatrix, DEFAULT_BIN_COUNT};
use frd_core::wavelet::{FilterVariant, WaveletKernel};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(frd_core::Error),
}

impl From<frd_core::Error> for CliError {
    fn from(e: frd_core::Error) -> Self {
        CliError::Data(e)
    }
}

#[derive(Parser)]
#[command(name = "frd", version, about = "Radiomic feature extraction and image-set distribution distances")]
struct Cli {
    /// Plain-text key=value config file; flags override config values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads (falls back to the FRD_WORKERS environment variable).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the radiomic feature catalog from a directory of images.
    Extract {
        #[arg(long, value_name = "DIR")]
        input: PathBuf,
        /// Output feature CSV path.
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
        /// Gray-level bin count (default 32).
        #[arg(long)]
        bins: Option<u32>,
        /// Wavelet kernel: haar, coif1 or none (default haar).
        #[arg(long)]
        wavelet: Option<String>,
        /// Feature families: `all` or a comma list of
        /// first,glcm,glrlm,glszm,gldm,ngtdm.
        #[arg(long)]
        families: Option<String>,
        /// Filter variants: `all` or a comma list of orig,ll,lh,hl,hh.
        #[arg(long)]
        variants: Option<String>,
        /// Canonical image size (default 256).
        #[arg(long)]
        size: Option<usize>,
        /// Override the stored bit depth of integer formats.
        #[arg(long)]
        bit_depth: Option<u32>,
    },
    /// Distance between two feature CSVs.
    Distance {
        #[arg(long = "ref", value_name = "CSV")]
        reference: PathBuf,
        #[arg(long, value_name = "CSV")]
        test: PathBuf,
        /// frd, frd-v0, frechet or mmd.
        #[arg(long)]
        metric: String,
        /// Log floor for the frd metric (default 1e-12).
        #[arg(long)]
        epsilon: Option<f64>,
        /// RBF bandwidth for mmd: `median` or a positive number.
        #[arg(long)]
        bandwidth: Option<String>,
    },
    /// Out-of-domain detection and scoring.
    Ood {
        #[command(subcommand)]
        action: OodCommand,
    },
    /// Feature-change report between two feature CSVs.
    Interpret {
        #[arg(long, value_name = "CSV")]
        a: PathBuf,
        #[arg(long, value_name = "CSV")]
        b: PathBuf,
        /// Number of ranked features in the report (default 20).
        #[arg(long)]
        top_k: Option<usize>,
        /// Write the report JSON here as well as stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Normalization reference: `a` (default) or `joint`.
        #[arg(long)]
        normalize: Option<String>,
    },
    /// Apply a severity-parameterized corruption to every image in a
    /// directory.
    Corrupt {
        #[arg(long, value_name = "DIR")]
        input: PathBuf,
        #[arg(long, value_name = "DIR")]
        output: PathBuf,
        /// noise, blur, swap or bias.
        #[arg(long)]
        kind: Option<String>,
        /// Severity percentage in [0, 100].
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Canonical image size (default 256).
        #[arg(long)]
        size: Option<usize>,
    },
    /// Dump the feature catalog as JSON.
    Catalog {
        #[arg(long)]
        families: Option<String>,
        #[arg(long)]
        variants: Option<String>,
        #[arg(long)]
        wavelet: Option<String>,
    },
}

#[derive(Subcommand)]
enum OodCommand {
    /// Binary per-image OOD labels against a reference feature CSV.
    Detect {
        #[arg(long = "ref", value_name = "CSV")]
        reference: PathBuf,
        #[arg(long, value_name = "CSV")]
        test: PathBuf,
        /// Reference-score percentile fixing the threshold (default 95).
        #[arg(long)]
        percentile: Option<f64>,
        /// Also write the report JSON to this path.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Dataset-level OOD score of a test CSV against a reference CSV.
    Dataset {
        #[arg(long = "ref", value_name = "CSV")]
        reference: PathBuf,
        #[arg(long, value_name = "CSV")]
        test: PathBuf,
    },
    /// Label each test row by the closer of two reference sets.
    Classify {
        #[arg(long = "ref-a", value_name = "CSV")]
        ref_a: PathBuf,
        #[arg(long = "ref-b", value_name = "CSV")]
        ref_b: PathBuf,
        #[arg(long, value_name = "CSV")]
        test: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let workers = match cfg.resolve_opt(cli.workers, "workers")? {
        Some(n) => Some(n),
        None => std::env::var("FRD_WORKERS").ok().and_then(|v| v.parse().ok()),
    };
    match workers {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("--workers {n}: {e}")))?;
            pool.install(|| dispatch(&cli.command, &cfg))
        }
        Some(_) => Err(CliError::Usage("--workers must be positive".into())),
        None => dispatch(&cli.command, &cfg),
    }
}

fn dispatch(command: &Command, cfg: &Config) -> Result<(), CliError> {
    match command {
        Command::Extract {
            input,
            output,
            bins,
            wavelet,
            families,
            variants,
            size,
            bit_depth,
        } => {
            let bins = cfg.resolve(*bins, "bins", DEFAULT_BIN_COUNT)?;
            let size = cfg.resolve(*size, "size", 256)?;
            let bit_depth = cfg.resolve_opt(*bit_depth, "bit_depth")?;
            let wavelet = cfg.resolve(wavelet.clone(), "wavelet", "haar".to_string())?;
            let families = cfg.resolve(families.clone(), "families", "all".to_string())?;
            let variants = cfg.resolve(variants.clone(), "variants", "all".to_string())?;
            let (kernel, catalog) = catalog_from_flags(&wavelet, &families, &variants)?;

            let set = imageio::load_image_set(input, size, bit_depth)?;
            let matrix = radiomics::extract_features(&set, &catalog, bins, &kernel)?;
            matrix.write_csv(output)?;
            eprintln!(
                "extracted {} features from {} images into {}",
                matrix.n_features(),
                matrix.n_images(),
                output.display()
            );
            Ok(())
        }
        Command::Distance {
            reference,
            test,
            metric,
            epsilon,
            bandwidth,
        } => {
            let epsilon = cfg.resolve(*epsilon, "epsilon", DEFAULT_EPSILON)?;
            let bandwidth = cfg.resolve(bandwidth.clone(), "bandwidth", "median".to_string())?;
            let ref_m = FeatureMatrix::read_csv(reference)?;
            let test_m = FeatureMatrix::read_csv(test)?;
            let result = match metric.as_str() {
                "frd" => metrics::frd(&ref_m, &test_m, epsilon)?,
                "frd-v0" => {
                    if ref_m
                        .catalog
                        .entries
                        .iter()
                        .any(|e| e.variant != FilterVariant::Original)
                    {
                        eprintln!(
                            "warning: frd-v0 is defined on the original-variant feature subset; \
                             the input carries wavelet columns"
                        );
                    }
                    metrics::frd_v0(&ref_m, &test_m)?
                }
                "frechet" => metrics::raw_frechet(&ref_m, &test_m)?,
                "mmd" => {
                    let bw = parse_bandwidth(&bandwidth)?;
                    metrics::mmd(&ref_m, &test_m, bw)?
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "--metric must be frd, frd-v0, frechet or mmd, got '{other}'"
                    )))
                }
            };
            print_json(&result);
            Ok(())
        }
        Command::Ood { action } => dispatch_ood(action, cfg),
        Command::Interpret {
            a,
            b,
            top_k,
            out,
            normalize,
        } => {
            let top_k = cfg.resolve(*top_k, "top_k", 20)?;
            let normalize = cfg.resolve(normalize.clone(), "normalize", "a".to_string())?;
            let reference = match normalize.as_str() {
                "a" => NormalizationRef::A,
                "joint" => NormalizationRef::Joint,
                other => {
                    return Err(CliError::Usage(format!(
                        "--normalize must be 'a' or 'joint', got '{other}'"
                    )))
                }
            };
            let ma = FeatureMatrix::read_csv(a)?;
            let mb = FeatureMatrix::read_csv(b)?;
            let report = interpret::delta_report(&ma, &mb, reference)?;
            let ranking = interpret::rank_image_changes(&ma, &mb).ok();

            let view = InterpretView::build(&ma, &report, ranking.as_ref(), top_k, &normalize);
            if let Some(path) = out {
                write_json(path, &view)?;
            }
            print_json(&view);
            Ok(())
        }
        Command::Corrupt {
            input,
            output,
            kind,
            p,
            seed,
            size,
        } => {
            let kind_name = cfg
                .resolve_opt(kind.clone(), "kind")?
                .ok_or_else(|| CliError::Usage("--kind is required (noise|blur|swap|bias)".into()))?;
            let kind = CorruptionKind::from_label(&kind_name).ok_or_else(|| {
                CliError::Usage(format!(
                    "--kind must be noise, blur, swap or bias, got '{kind_name}'"
                ))
            })?;
            let severity = cfg.resolve(*p, "p", 25.0)?;
            let seed = cfg.resolve(*seed, "seed", 42)?;
            let size = cfg.resolve(*size, "size", 256)?;
            corrupt_directory(input, output, CorruptionSpec { kind, severity, seed }, size)
        }
        Command::Catalog {
            families,
            variants,
            wavelet,
        } => {
            let wavelet = cfg.resolve(wavelet.clone(), "wavelet", "haar".to_string())?;
            let families = cfg.resolve(families.clone(), "families", "all".to_string())?;
            let variants = cfg.resolve(variants.clone(), "variants", "all".to_string())?;
            let (_, catalog) = catalog_from_flags(&wavelet, &families, &variants)?;
            println!("{}", catalog.to_json());
            Ok(())
        }
    }
}

fn dispatch_ood(action: &OodCommand, cfg: &Config) -> Result<(), CliError> {
    match action {
        OodCommand::Detect {
            reference,
            test,
            percentile,
            report,
        } => {
            let percentile = cfg.resolve(*percentile, "percentile", 95.0)?;
            let ref_m = FeatureMatrix::read_csv(reference)?;
            let test_m = FeatureMatrix::read_csv(test)?;
            let result = ood::detect(&test_m, &ref_m, percentile)?;
            if let Some(path) = report {
                write_json(path, &result)?;
            }
            print_json(&result);
            Ok(())
        }
        OodCommand::Dataset { reference, test } => {
            let ref_m = FeatureMatrix::read_csv(reference)?;
            let test_m = FeatureMatrix::read_csv(test)?;
            let value = ood::nfrd_group(&test_m, &ref_m)?;
            print_json(&serde_json::json!({ "nfrd_group": value }));
            Ok(())
        }
        OodCommand::Classify { ref_a, ref_b, test } => {
            let a = FeatureMatrix::read_csv(ref_a)?;
            let b = FeatureMatrix::read_csv(ref_b)?;
            let test_m = FeatureMatrix::read_csv(test)?;
            test_m.same_catalog(&a)?;
            let mut rows = Vec::with_capacity(test_m.n_images());
            for i in 0..test_m.n_images() {
                let c = ood::classify_by_reference(test_m.data.row(i), &a, &b)?;
                rows.push(serde_json::json!({
                    "id": test_m.ids[i],
                    "label": u8::from(c.label),
                    "score_a": c.score_a,
                    "score_b": c.score_b,
                }));
            }
            print_json(&rows);
            Ok(())
        }
    }
}

/// Parses the wavelet/families/variants flags into a kernel and catalog.
/// `--wavelet none` restricts the catalog to the original variant.
fn catalog_from_flags(
    wavelet: &str,
    families: &str,
    variants: &str,
) -> Result<(WaveletKernel, FeatureCatalog), CliError> {
    let selected_variants: Vec<FilterVariant> = if variants == "all" {
        FilterVariant::ALL.to_vec()
    } else {
        variants
            .split(',')
            .map(|tag| match tag.trim() {
                "orig" | "original" => Ok(FilterVariant::Original),
                "ll" => Ok(FilterVariant::LL),
                "lh" => Ok(FilterVariant::LH),
                "hl" => Ok(FilterVariant::HL),
                "hh" => Ok(FilterVariant::HH),
                other => Err(CliError::Usage(format!(
                    "--variants: unknown variant '{other}'"
                ))),
            })
            .collect::<Result<_, _>>()?
    };
    let selected_families: Vec<FeatureFamily> = if families == "all" {
        FeatureFamily::ALL.to_vec()
    } else {
        families
            .split(',')
            .map(|tag| {
                FeatureFamily::from_label(tag.trim()).ok_or_else(|| {
                    CliError::Usage(format!("--families: unknown family '{}'", tag.trim()))
                })
            })
            .collect::<Result<_, _>>()?
    };

    let (kernel, variants) = match wavelet {
        "none" => {
            if selected_variants
                .iter()
                .any(|v| *v != FilterVariant::Original)
            {
                return Err(CliError::Usage(
                    "--wavelet none is incompatible with wavelet variants".into(),
                ));
            }
            (WaveletKernel::haar(), vec![FilterVariant::Original])
        }
        name => (WaveletKernel::by_name(name)?, selected_variants),
    };
    let catalog = FeatureCatalog::full().subset(&variants, &selected_families);
    if catalog.is_empty() {
        return Err(CliError::Usage(
            "selected families/variants produce an empty catalog".into(),
        ));
    }
    Ok((kernel, catalog))
}

fn parse_bandwidth(raw: &str) -> Result<Bandwidth, CliError> {
    if raw == "median" {
        return Ok(Bandwidth::Median);
    }
    match raw.parse::<f64>() {
        Ok(v) if v > 0.0 => Ok(Bandwidth::Fixed(v)),
        _ => Err(CliError::Usage(format!(
            "--bandwidth must be 'median' or a positive number, got '{raw}'"
        ))),
    }
}

/// Applies the corruption file-by-file so outputs keep each input's
/// filename and format.
fn corrupt_directory(
    input: &Path,
    output: &Path,
    spec: CorruptionSpec,
    size: usize,
) -> Result<(), CliError> {
    use rayon::prelude::*;
    let entries = std::fs::read_dir(input).map_err(|e| {
        CliError::Data(frd_core::Error::FileError {
            path: input.to_path_buf(),
            message: e.to_string(),
        })
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("png" | "pgm" | "rawf32")
                )
        })
        .collect();
    if files.is_empty() {
        return Err(CliError::Data(frd_core::Error::EmptyInput(format!(
            "no supported image files in {}",
            input.display()
        ))));
    }
    files.sort();
    std::fs::create_dir_all(output).map_err(|e| {
        CliError::Data(frd_core::Error::FileError {
            path: output.to_path_buf(),
            message: e.to_string(),
        })
    })?;
    files
        .par_iter()
        .map(|path| -> Result<(), frd_core::Error> {
            let img = imageio::load_image(path, size, None)?;
            let corrupted = corruptions::apply(&img, &spec)?;
            let dest = output.join(path.file_name().expect("regular file has a name"));
            imageio::write_image(&corrupted, dest)
        })
        .collect::<Result<Vec<_>, _>>()?;
    eprintln!(
        "corrupted {} images into {}",
        files.len(),
        output.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct RankedFeature {
    rank: usize,
    feature: String,
    column: String,
    delta: f64,
    abs_delta: f64,
}

#[derive(Serialize)]
struct RankedImage {
    id: String,
    change_norm: f64,
}

#[derive(Serialize)]
struct InterpretView {
    normalize_ref: String,
    m: usize,
    k50: usize,
    top_features: Vec<RankedFeature>,
    coverage_curve: Vec<(usize, f64)>,
    /// Present only when the two sets share ids pairwise.
    image_ranking: Option<Vec<RankedImage>>,
}

impl InterpretView {
    fn build(
        a: &FeatureMatrix,
        report: &interpret::DeltaReport,
        ranking: Option<&interpret::ImageChangeRanking>,
        top_k: usize,
        normalize: &str,
    ) -> Self {
        let top_features = report
            .ranked_features
            .iter()
            .take(top_k)
            .enumerate()
            .map(|(i, (entry, abs))| {
                let col = a
                    .catalog
                    .entries
                    .iter()
                    .position(|e| e == entry)
                    .expect("ranked entries come from this catalog");
                RankedFeature {
                    rank: i + 1,
                    feature: entry.human_name(),
                    column: entry.column_name(),
                    delta: report.delta[col],
                    abs_delta: *abs,
                }
            })
            .collect();
        InterpretView {
            normalize_ref: normalize.to_string(),
            m: a.n_features(),
            k50: report.k50,
            top_features,
            coverage_curve: report.coverage_curve.clone(),
            image_ranking: ranking.map(|r| {
                r.pairs
                    .iter()
                    .map(|(id, n)| RankedImage {
                        id: id.clone(),
                        change_norm: *n,
                    })
                    .collect()
            }),
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    std::fs::write(path, text.as_bytes()).map_err(|e| {
        CliError::Data(frd_core::Error::FileError {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    })
}
