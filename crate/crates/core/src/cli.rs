//! Command-line front end.
//!
//! Exit status: 0 success, 1 usage, 2 I/O, 3 format or parse, 4 domain
//! (dimension or parameter).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use rand::rngs::OsRng;
use rand::TryRngCore;

use crate::analysis::{analyze, AnalysisReport};
use crate::chaotic_maps::{CltParams, LshmParams};
use crate::error::{Error, ErrorClass};
use crate::image::{check_cipher_dims, padded_len, GrayImage};
use crate::image_io::{read_pgm_with_header, write_pgm, PadNote, PgmHeader};
use crate::key_schedule::KeyMaterial;
use crate::pipeline::derive_context;
use crate::scene::synthetic_scene;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

/// Set to any value to disable colored help and error output.
pub const NO_COLOR_ENV: &str = "XCROSS_NO_COLOR";

#[derive(Debug, Parser)]
#[command(name = "xcross", version, about = "Chaos-keyed grayscale image cipher")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a key file, from explicit values, OS randomness, or both.
    Keygen(KeygenArgs),
    /// Encrypt a binary PGM image.
    Encrypt {
        #[arg(long = "in", value_name = "PGM")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Zero-pad to multiples of 4 and record the original size.
        #[arg(long)]
        pad: bool,
    },
    /// Decrypt a PGM produced by `encrypt`.
    Decrypt {
        #[arg(long = "in", value_name = "PGM")]
        input: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print entropy, correlation, GLCM and histogram statistics.
    Analyze {
        #[arg(long = "in", value_name = "PGM")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt a test image and report plain and cipher statistics side by side.
    Reproduce {
        /// Defaults to a built-in 256x256 synthetic scene.
        #[arg(long = "in", value_name = "PGM")]
        input: Option<PathBuf>,
        /// Defaults to the built-in reference key.
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Debug, clap::Args)]
struct KeygenArgs {
    /// Key file to write; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Draw every value not given explicitly from OS randomness.
    #[arg(long, action = ArgAction::SetTrue)]
    random: bool,
    #[arg(long = "lshm-x0")]
    lshm_x0: Option<f64>,
    #[arg(long = "lshm-y0", allow_hyphen_values = true)]
    lshm_y0: Option<f64>,
    #[arg(long = "lshm-k1")]
    lshm_k1: Option<f64>,
    #[arg(long = "lshm-k2")]
    lshm_k2: Option<f64>,
    #[arg(long = "lshm-alpha")]
    lshm_alpha: Option<f64>,
    #[arg(long = "lshm-beta")]
    lshm_beta: Option<f64>,
    #[arg(long = "clt-z0")]
    clt_z0: Option<f64>,
    #[arg(long = "clt-lambda")]
    clt_lambda: Option<f64>,
    #[arg(long = "clt-alpha")]
    clt_alpha: Option<f64>,
    #[arg(long = "sbox-seed1")]
    sbox_seed1: Option<f64>,
    #[arg(long = "sbox-seed2")]
    sbox_seed2: Option<f64>,
    #[arg(long = "sbox-seed3")]
    sbox_seed3: Option<f64>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) => match e.class() {
                ErrorClass::Io => EXIT_IO,
                ErrorClass::Format => EXIT_FORMAT,
                ErrorClass::Domain => EXIT_DOMAIN,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = if std::env::var_os(NO_COLOR_ENV).is_some() {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = match Cli::command().color(color).try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("xcross: error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Keygen(args) => keygen(args),
        Command::Encrypt { input, key, out, pad } => encrypt_file(&input, &key, &out, pad),
        Command::Decrypt { input, key, out } => decrypt_file(&input, &key, &out),
        Command::Analyze { input, format, out } => {
            let (_, img) = load_pgm(&input)?;
            let report = analyze(&img)?;
            let text = match format {
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            emit(out.as_deref(), text.as_bytes())
        }
        Command::Reproduce {
            input,
            key,
            format,
            out,
        } => reproduce(input.as_deref(), key.as_deref(), format, out.as_deref()),
    }
}

/// Writes through a temporary sibling file so a failed run leaves no partial output.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load_pgm(path: &Path) -> CliResult<(PgmHeader, GrayImage)> {
    let bytes = fs::read(path)?;
    read_pgm_with_header(&bytes).map_err(|e| CliError::Lib(e.into()))
}

fn load_key(path: &Path) -> CliResult<KeyMaterial> {
    let text = fs::read_to_string(path)?;
    Ok(KeyMaterial::from_key_file(&text)?)
}

fn keygen(args: KeygenArgs) -> CliResult<()> {
    let explicit = [
        ("lshm.x0", args.lshm_x0),
        ("lshm.y0", args.lshm_y0),
        ("lshm.k1", args.lshm_k1),
        ("lshm.k2", args.lshm_k2),
        ("lshm.alpha", args.lshm_alpha),
        ("lshm.beta", args.lshm_beta),
        ("clt.z0", args.clt_z0),
        ("clt.lambda", args.clt_lambda),
        ("clt.alpha", args.clt_alpha),
        ("sbox.seed1", args.sbox_seed1),
        ("sbox.seed2", args.sbox_seed2),
        ("sbox.seed3", args.sbox_seed3),
    ];
    let base = if args.random {
        KeyMaterial::random(&mut OsRng.unwrap_err())
    } else {
        // placeholder for absent fields, so explicit values are range-checked
        // before reporting what is missing
        KeyMaterial::reference()
    };
    let key = overlay(&base, &explicit)?;
    if !args.random {
        let missing: Vec<&str> = explicit
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(name, _)| *name)
            .collect();
        if !missing.is_empty() {
            return Err(CliError::Usage(format!(
                "keygen needs --random or explicit values; missing {}",
                missing.join(", ")
            )));
        }
    }
    if !key.is_well_mixed() {
        eprintln!("xcross: warning: a chaotic map settles on a short cycle under these parameters; the key is weak");
    }
    emit(args.out.as_deref(), key.to_key_file().as_bytes())
}

fn overlay(base: &KeyMaterial, explicit: &[(&str, Option<f64>); 12]) -> CliResult<KeyMaterial> {
    let l = base.lshm();
    let c = base.clt();
    let s = base.sbox_seeds();
    let pick = |i: usize, default: f64| explicit[i].1.unwrap_or(default);
    let lshm = LshmParams::new(
        pick(2, l.k1()),
        pick(3, l.k2()),
        pick(4, l.alpha()),
        pick(5, l.beta()),
        pick(0, l.x0()),
        pick(1, l.y0()),
    )?;
    let clt = CltParams::new(pick(7, c.lambda()), pick(8, c.alpha()), pick(6, c.z0()))?;
    Ok(KeyMaterial::new(
        lshm,
        clt,
        [pick(9, s[0]), pick(10, s[1]), pick(11, s[2])],
    )?)
}

fn encrypt_file(input: &Path, key_path: &Path, out: &Path, pad: bool) -> CliResult<()> {
    let (_, img) = load_pgm(input)?;
    let key = load_key(key_path)?;
    let (img, note) = match check_cipher_dims(img.rows(), img.cols()) {
        Ok(()) => (img, None),
        Err(e) if !pad => return Err(e.into()),
        Err(_) => {
            let note = PadNote {
                width: img.cols(),
                height: img.rows(),
            };
            (img.pad_to(padded_len(img.rows()), padded_len(img.cols()))?, Some(note))
        }
    };
    let ct = derive_context(&key, img.rows(), img.cols())?.encrypt(&img)?;
    write_atomic(out, &write_pgm(&ct, note))
}

fn decrypt_file(input: &Path, key_path: &Path, out: &Path) -> CliResult<()> {
    let (header, ct) = load_pgm(input)?;
    let key = load_key(key_path)?;
    let plain = derive_context(&key, ct.rows(), ct.cols())?.decrypt(&ct)?;
    let plain = match header.pad_note() {
        Some(note) => {
            if note.width > ct.cols() || note.height > ct.rows() || note.width == 0 || note.height == 0 {
                return Err(CliError::Lib(Error::Pgm(crate::image_io::PgmError::Malformed(
                    format!(
                        "recorded original size {}x{} does not fit {}x{}",
                        note.width,
                        note.height,
                        ct.cols(),
                        ct.rows()
                    ),
                ))));
            }
            plain.crop(0, 0, note.height, note.width)?
        }
        None => plain,
    };
    write_atomic(out, &write_pgm(&plain, None))
}

fn reproduce(input: Option<&Path>, key: Option<&Path>, format: Format, out: Option<&Path>) -> CliResult<()> {
    let img = match input {
        Some(path) => load_pgm(path)?.1,
        None => synthetic_scene(256, 256),
    };
    let key = match key {
        Some(path) => load_key(path)?,
        None => KeyMaterial::reference(),
    };
    let ctx = derive_context(&key, img.rows(), img.cols())?;
    let ct = ctx.encrypt(&img)?;
    let exact = ctx.decrypt(&ct)? == img;
    let plain = analyze(&img)?;
    let cipher = analyze(&ct)?;
    let text = match format {
        Format::Csv => side_by_side_csv(&plain, &cipher, exact),
        Format::Text => format!(
            "[plain]\n{}\n[cipher]\n{}\n[round_trip]\nexact = {exact}\n",
            metrics_text(&plain),
            metrics_text(&cipher)
        ),
    };
    emit(out, text.as_bytes())
}

fn metrics_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    for (name, value) in r.metrics() {
        s.push_str(&format!("{name} = {value}\n"));
    }
    s
}

fn side_by_side_csv(plain: &AnalysisReport, cipher: &AnalysisReport, exact: bool) -> String {
    let mut s = String::from("metric,plain,cipher\n");
    for ((name, p), (_, c)) in plain.metrics().into_iter().zip(cipher.metrics()) {
        s.push_str(&format!("{name},{p},{c}\n"));
    }
    s.push_str(&format!("round_trip_exact,{exact},{exact}\n"));
    s
}
