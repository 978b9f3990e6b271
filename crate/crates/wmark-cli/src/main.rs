//! Batch frontend for the watermarking library: embed, extract, attack,
//! evaluate, a config-driven experiment runner, and an Arnold-period
//! helper.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/validation error,
//! 3 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use wmark::attacks::{crop, wavelet_compress, CompressionAttackSpec, CropAttackSpec};
use wmark::colorspace::rgb_to_ycbcr;
use wmark::{arnold, imageio, metrics};
use wmark::{embed, extract, EmbedParams, RgbImage, SelectionStrategy, WatermarkKey, WmarkError};

#[derive(Parser)]
#[command(name = "wmark", version, about = "Blind wavelet-domain color image watermarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectKind {
    Rowmajor,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum PsnrChannels {
    Rgb,
    Y,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a binary watermark into a host image; writes the marked
    /// image and the extraction key.
    Embed {
        host: PathBuf,
        watermark: PathBuf,
        out: PathBuf,
        key: PathBuf,
        /// Quantization step for the LL3 coefficients.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Arnold scrambling iterations (must be below the map period).
        #[arg(long, default_value_t = 10)]
        arnold: u64,
        /// Coefficient selection strategy.
        #[arg(long, value_enum, default_value_t = SelectKind::Rowmajor)]
        select: SelectKind,
        /// Seed for the random selection strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Blind-extract a watermark from an image using a key file.
    Extract {
        image: PathBuf,
        key: PathBuf,
        out: PathBuf,
    },
    /// Apply exactly one attack to an image.
    Attack {
        image: PathBuf,
        out: PathBuf,
        #[command(flatten)]
        which: AttackArgs,
        /// Gray fill value for the cropped rectangle.
        #[arg(long, default_value_t = 0, requires = "crop")]
        fill: u8,
    },
    /// Report quality metrics for a watermark pair and, optionally, an
    /// image pair.
    Evaluate {
        original_wm: PathBuf,
        extracted_wm: PathBuf,
        #[arg(long, requires = "watermarked")]
        host: Option<PathBuf>,
        #[arg(long, requires = "host")]
        watermarked: Option<PathBuf>,
        /// Channels pooled into the PSNR figure.
        #[arg(long, value_enum, default_value_t = PsnrChannels::Rgb)]
        psnr_channels: PsnrChannels,
    },
    /// Run an embed -> attack -> extract -> evaluate grid from a config
    /// file; prints a table and optionally writes CSV.
    Experiment { config: PathBuf },
    /// Print the Arnold map period for an N x N matrix.
    ArnoldPeriod {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AttackArgs {
    /// Wavelet-compression attack: zero detail coefficients with
    /// magnitude <= T.
    #[arg(long, value_name = "T")]
    compress: Option<f64>,
    /// Cropping attack: x,y,w,h rectangle replaced by the fill value.
    #[arg(long, value_name = "X,Y,W,H")]
    crop: Option<String>,
}

enum CliError {
    Usage(String),
    Data(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Io(m) => m,
        }
    }
}

impl From<WmarkError> for CliError {
    fn from(e: WmarkError) -> Self {
        match e {
            WmarkError::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_string(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

fn parse_rect(text: &str) -> Result<(usize, usize, usize, usize), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || CliError::Usage(format!("bad rectangle `{text}`: expected X,Y,W,H"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut nums = parts.iter().map(|p| p.trim().parse::<usize>());
    let mut next = || nums.next().unwrap().map_err(|_| bad());
    Ok((next()?, next()?, next()?, next()?))
}

fn selection(kind: SelectKind, seed: u64) -> SelectionStrategy {
    match kind {
        SelectKind::Rowmajor => SelectionStrategy::RowMajor,
        SelectKind::Random => SelectionStrategy::Random { seed },
    }
}

fn cmd_embed(
    host: &PathBuf,
    watermark: &PathBuf,
    out: &PathBuf,
    key_path: &PathBuf,
    params: &EmbedParams,
) -> Result<(), CliError> {
    let host_img = imageio::load_rgb(host)?;
    let wm = imageio::load_watermark(watermark)?;
    let (marked, key) = embed(&host_img, &wm, params)?;
    let psnr = metrics::psnr_rgb(&host_img, &marked)?;
    let corr = metrics::pearson_rgb(&host_img, &marked)?;
    imageio::save_rgb(&marked, out)?;
    write_string(key_path, &key.to_text())?;
    println!("psnr_db {}", fmt_db(psnr));
    println!("correlation {corr:.4}");
    Ok(())
}

fn cmd_extract(image: &PathBuf, key_path: &PathBuf, out: &PathBuf) -> Result<(), CliError> {
    let key = WatermarkKey::from_text(&read_to_string(key_path)?)?;
    let img = imageio::load_rgb(image)?;
    let wm = extract(&img, &key)?;
    imageio::save_watermark(&wm, out)?;
    Ok(())
}

fn cmd_attack(
    image: &PathBuf,
    out: &PathBuf,
    which: &AttackArgs,
    fill: u8,
) -> Result<(), CliError> {
    let img = imageio::load_rgb(image)?;
    let attacked = if let Some(t) = which.compress {
        if t < 0.0 {
            return Err(CliError::Usage(format!("compression threshold must be >= 0, got {t}")));
        }
        wavelet_compress(&img, &CompressionAttackSpec::new(t))?
    } else {
        let (x, y, w, h) = parse_rect(which.crop.as_deref().unwrap())?;
        let mut spec = CropAttackSpec::new(x, y, w, h);
        spec.fill = fill;
        crop(&img, &spec)?
    };
    imageio::save_rgb(&attacked, out)?;
    Ok(())
}

fn cmd_evaluate(
    original_wm: &PathBuf,
    extracted_wm: &PathBuf,
    images: Option<(&PathBuf, &PathBuf)>,
    psnr_channels: PsnrChannels,
) -> Result<(), CliError> {
    let wm = imageio::load_watermark(original_wm)?;
    let wm_star = imageio::load_watermark(extracted_wm)?;
    println!("nc {:.4}", metrics::nc(&wm, &wm_star)?);
    println!("error_bits_pct {:.4}", metrics::error_bits_pct(&wm, &wm_star)?);
    if let Some((host, marked)) = images {
        let a = imageio::load_rgb(host)?;
        let b = imageio::load_rgb(marked)?;
        let psnr = match psnr_channels {
            PsnrChannels::Rgb => metrics::psnr_rgb(&a, &b)?,
            PsnrChannels::Y => metrics::psnr(&rgb_to_ycbcr(&a).y, &rgb_to_ycbcr(&b).y)?,
        };
        println!("psnr_db {}", fmt_db(psnr));
        println!("correlation {:.4}", metrics::pearson_rgb(&a, &b)?);
    }
    Ok(())
}

// --- experiment runner ----------------------------------------------------

#[derive(Clone)]
enum AttackSpec {
    None,
    Compress(f64),
    Crop { x: usize, y: usize, w: usize, h: usize, fill: u8 },
}

impl AttackSpec {
    fn label(&self) -> String {
        match self {
            AttackSpec::None => "none".to_string(),
            AttackSpec::Compress(t) => format!("compress:{t}"),
            AttackSpec::Crop { x, y, w, h, fill } => format!("crop:{x}:{y}:{w}:{h}:fill{fill}"),
        }
    }

    fn apply(&self, img: &RgbImage) -> Result<RgbImage, WmarkError> {
        match *self {
            AttackSpec::None => Ok(img.clone()),
            AttackSpec::Compress(t) => wavelet_compress(img, &CompressionAttackSpec::new(t)),
            AttackSpec::Crop { x, y, w, h, fill } => {
                let mut spec = CropAttackSpec::new(x, y, w, h);
                spec.fill = fill;
                crop(img, &spec)
            }
        }
    }
}

struct ExperimentConfig {
    hosts: Vec<PathBuf>,
    watermark: PathBuf,
    params: EmbedParams,
    attacks: Vec<AttackSpec>,
    csv_out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Line-oriented `field value` text, same family as the key format.
    /// Repeatable fields: `host`, `compress`, `crop`.
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut hosts = Vec::new();
        let mut watermark = None;
        let mut delta = 1.0;
        let mut arnold_times = 10;
        let mut select = SelectKind::Rowmajor;
        let mut seed = 0u64;
        let mut fill = 0u8;
        let mut attacks = vec![AttackSpec::None];
        let mut csv_out = None;

        let bad = |field: &str, value: &str| {
            CliError::Data(format!("config: bad value for `{field}`: {value}"))
        };
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (field, value) = line
                .split_once(' ')
                .ok_or_else(|| CliError::Data(format!("config: malformed line `{line}`")))?;
            let value = value.trim();
            match field {
                "host" => hosts.push(PathBuf::from(value)),
                "watermark" => watermark = Some(PathBuf::from(value)),
                "delta" => delta = value.parse().map_err(|_| bad(field, value))?,
                "arnold" => arnold_times = value.parse().map_err(|_| bad(field, value))?,
                "select" => {
                    select = match value {
                        "rowmajor" => SelectKind::Rowmajor,
                        "random" => SelectKind::Random,
                        _ => return Err(bad(field, value)),
                    }
                }
                "seed" => seed = value.parse().map_err(|_| bad(field, value))?,
                "fill" => fill = value.parse().map_err(|_| bad(field, value))?,
                "compress" => {
                    attacks.push(AttackSpec::Compress(value.parse().map_err(|_| bad(field, value))?))
                }
                "crop" => {
                    let (x, y, w, h) = parse_rect(value)
                        .map_err(|_| bad(field, value))?;
                    attacks.push(AttackSpec::Crop { x, y, w, h, fill })
                }
                "csv" => csv_out = Some(PathBuf::from(value)),
                other => {
                    return Err(CliError::Data(format!("config: unknown field `{other}`")))
                }
            }
        }
        if hosts.is_empty() {
            return Err(CliError::Data("config: at least one `host` required".into()));
        }
        let watermark =
            watermark.ok_or_else(|| CliError::Data("config: `watermark` required".into()))?;
        Ok(ExperimentConfig {
            hosts,
            watermark,
            params: EmbedParams {
                arnold_times,
                quant_step: delta,
                selection: selection(select, seed),
            },
            attacks,
            csv_out,
        })
    }
}

struct Row {
    image: String,
    attack: String,
    psnr_db: String,
    correlation: String,
    nc: String,
    error_bits_pct: String,
    status: String,
}

fn run_cell(cfg: &ExperimentConfig, host_path: &PathBuf, attack: &AttackSpec) -> Row {
    let image = host_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| host_path.display().to_string());
    let mut row = Row {
        image,
        attack: attack.label(),
        psnr_db: String::new(),
        correlation: String::new(),
        nc: String::new(),
        error_bits_pct: String::new(),
        status: "ok".to_string(),
    };
    let res: Result<(), WmarkError> = (|| {
        let host = imageio::load_rgb(host_path)?;
        let wm = imageio::load_watermark(&cfg.watermark)?;
        let (marked, key) = embed(&host, &wm, &cfg.params)?;
        row.psnr_db = fmt_db(metrics::psnr_rgb(&host, &marked)?);
        row.correlation = format!("{:.4}", metrics::pearson_rgb(&host, &marked)?);
        let attacked = attack.apply(&marked)?;
        let got = extract(&attacked, &key)?;
        row.nc = format!("{:.4}", metrics::nc(&wm, &got)?);
        row.error_bits_pct = format!("{:.4}", metrics::error_bits_pct(&wm, &got)?);
        Ok(())
    })();
    if let Err(e) = res {
        // Keep the CSV single-line and comma-free per cell.
        row.status = format!("error: {e}").replace([',', '\n'], ";");
    }
    row
}

fn thread_budget(cells: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = match std::env::var("WMARK_THREADS") {
        Ok(v) => v.parse::<usize>().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => available,
    };
    cap.min(cells).max(1)
}

fn cmd_experiment(config_path: &PathBuf) -> Result<(), CliError> {
    let cfg = ExperimentConfig::parse(&read_to_string(config_path)?)?;
    let cells: Vec<(usize, &PathBuf, &AttackSpec)> = cfg
        .hosts
        .iter()
        .flat_map(|h| cfg.attacks.iter().map(move |a| (h, a)))
        .enumerate()
        .map(|(i, (h, a))| (i, h, a))
        .collect();

    // Worker pool over an atomic cursor; rows land at their config-order
    // slot regardless of which thread finishes first.
    let rows: Vec<Mutex<Option<Row>>> = (0..cells.len()).map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    let workers = thread_budget(cells.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let (slot, host, attack) = cells[i];
                *rows[slot].lock().unwrap() = Some(run_cell(&cfg, host, attack));
            });
        }
    });
    let rows: Vec<Row> = rows
        .into_iter()
        .map(|m| m.into_inner().unwrap().unwrap())
        .collect();

    const HEADERS: [&str; 7] = [
        "image",
        "attack",
        "psnr_db",
        "correlation",
        "nc",
        "error_bits_pct",
        "status",
    ];
    let cells_of = |r: &Row| -> [String; 7] {
        [
            r.image.clone(),
            r.attack.clone(),
            r.psnr_db.clone(),
            r.correlation.clone(),
            r.nc.clone(),
            r.error_bits_pct.clone(),
            r.status.clone(),
        ]
    };

    // Aligned text table on stdout.
    let mut widths: Vec<usize> = HEADERS.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(cells_of(row)) {
            *w = (*w).max(cell.len());
        }
    }
    let print_line = |cells: &[String]| {
        let mut line = String::new();
        for (cell, w) in cells.iter().zip(&widths) {
            let _ = write!(line, "{cell:<w$}  ");
        }
        println!("{}", line.trim_end());
    };
    print_line(&HEADERS.map(String::from));
    for row in &rows {
        print_line(&cells_of(row));
    }

    // Machine-readable CSV.
    let mut csv = HEADERS.join(",");
    csv.push('\n');
    for row in &rows {
        csv.push_str(&cells_of(row).join(","));
        csv.push('\n');
    }
    match &cfg.csv_out {
        Some(path) => write_string(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Embed {
            host,
            watermark,
            out,
            key,
            delta,
            arnold,
            select,
            seed,
        } => {
            let params = EmbedParams {
                arnold_times: *arnold,
                quant_step: *delta,
                selection: selection(*select, *seed),
            };
            cmd_embed(host, watermark, out, key, &params)
        }
        Command::Extract { image, key, out } => cmd_extract(image, key, out),
        Command::Attack {
            image,
            out,
            which,
            fill,
        } => cmd_attack(image, out, which, *fill),
        Command::Evaluate {
            original_wm,
            extracted_wm,
            host,
            watermarked,
            psnr_channels,
        } => cmd_evaluate(
            original_wm,
            extracted_wm,
            host.as_ref().zip(watermarked.as_ref()),
            *psnr_channels,
        ),
        Command::Experiment { config } => cmd_experiment(config),
        Command::ArnoldPeriod { n } => {
            println!("{}", arnold::period(*n as usize));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wmark: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
