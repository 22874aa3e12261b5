//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 template, 3 data, 4 expansion, 5 I/O.
//! Diagnostics go to stderr only.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::bindings::{dump_records, parse_records_located, Record};
use crate::lexer::Location;
use crate::expand::{check_records, expand_all, ExpandError};
use crate::lexer::{dump_tokens, tokenize, TokenizerMode};
use crate::template::{parse_template, Template};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Template = 2,
    Data = 3,
    Expansion = 4,
    Io = 5,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    /// Write one output file per data record
    Generate,
    /// Print the template with all directives removed
    Erase,
    /// Validate the template, and the data against it if given
    Check,
    /// Dump the template's token stream
    Tokens,
    /// Dump the parsed data records
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Space,
    Lexical,
}

impl From<ModeArg> for TokenizerMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Space => TokenizerMode::Space,
            ModeArg::Lexical => TokenizerMode::Lexical,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "protoplate",
    version,
    about = "Generate source files from compilable templates with /*C ... */ directives"
)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Subcommand,

    /// Template source file
    #[arg(long)]
    template: Option<PathBuf>,

    /// Binding-data file
    #[arg(long)]
    data: Option<PathBuf>,

    /// How the template is split into tokens
    #[arg(long, value_enum, default_value = "space")]
    tokenizer: ModeArg,

    /// Record key whose value names each generated file
    #[arg(long, default_value = "name")]
    name_key: String,

    /// Directory generated files are written to
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,

    /// Appended verbatim to each unit name to form its file name
    #[arg(long, default_value = "")]
    out_suffix: String,

    /// Replace existing output files
    #[arg(long)]
    overwrite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub template_path: Option<PathBuf>,
    pub data_path: Option<PathBuf>,
    pub tokenizer: TokenizerMode,
    pub name_key: String,
    pub out_dir: PathBuf,
    pub out_suffix: String,
    pub overwrite: bool,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        RunConfig {
            subcommand,
            template_path: None,
            data_path: None,
            tokenizer: TokenizerMode::Space,
            name_key: "name".to_owned(),
            out_dir: PathBuf::from("."),
            out_suffix: String::new(),
            overwrite: false,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        RunConfig {
            subcommand: cli.subcommand,
            template_path: cli.template,
            data_path: cli.data,
            tokenizer: cli.tokenizer.into(),
            name_key: cli.name_key,
            out_dir: cli.out_dir,
            out_suffix: cli.out_suffix,
            overwrite: cli.overwrite,
        }
    }
}

/// A failed run: the exit status plus the diagnostic already formatted.
#[derive(Debug)]
pub struct Failure {
    pub status: ExitStatus,
    pub message: String,
}

impl Failure {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    /// `path:line:col: message`; `err` displays as `line:col: message`.
    fn located(status: ExitStatus, path: &Path, err: impl Display) -> Self {
        Failure::new(status, format!("{}:{err}", path.display()))
    }
}

pub type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    ExitStatus::Success.code()
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    ExitStatus::Usage.code()
                }
            };
        }
    };
    run_config(&RunConfig::from(cli), stdout, stderr)
}

pub fn run_config(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match cfg.subcommand {
        Subcommand::Generate => cmd_generate(cfg, stdout),
        Subcommand::Erase => cmd_erase(cfg, stdout),
        Subcommand::Check => cmd_check(cfg),
        Subcommand::Tokens => cmd_tokens(cfg, stdout),
        Subcommand::Records => cmd_records(cfg, stdout),
    };
    match outcome {
        Ok(()) => ExitStatus::Success.code(),
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.status.code()
        }
    }
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str, cfg: &RunConfig) -> Result<&'a Path, Failure> {
    path.as_deref().ok_or_else(|| {
        let sub = format!("{:?}", cfg.subcommand).to_lowercase();
        Failure::new(ExitStatus::Usage, format!("`{sub}` requires {flag} <PATH>"))
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(ExitStatus::Io, format!("cannot read {}: {e}", path.display())))
}

fn load_template(cfg: &RunConfig) -> Result<(PathBuf, Template), Failure> {
    let path = required(&cfg.template_path, "--template", cfg)?;
    let source = read(path)?;
    let template = parse_template(&source, cfg.tokenizer)
        .map_err(|e| Failure::located(ExitStatus::Template, path, e))?;
    Ok((path.to_owned(), template))
}

struct Data {
    path: PathBuf,
    records: Vec<Record>,
    starts: Vec<Location>,
}

fn load_records(path: &Path) -> Result<Data, Failure> {
    let text = read(path)?;
    let located = parse_records_located(&text).map_err(|e| Failure::located(ExitStatus::Data, path, e))?;
    let (starts, records) = located.into_iter().unzip();
    Ok(Data {
        path: path.to_owned(),
        records,
        starts,
    })
}

/// Key errors point into the template; naming errors point at the record
/// in the data file.
fn expansion_failure(err: ExpandError, template_path: &Path, data: &Data) -> Failure {
    let record = match err.root() {
        ExpandError::MissingNameKey { record, .. } => Some(*record),
        ExpandError::DuplicateUnitName { second, .. } => Some(*second),
        _ => None,
    };
    let message = match (err.location(), record.and_then(|i| data.starts.get(i))) {
        (Some(_), _) => format!("{}:{err}", template_path.display()),
        (None, Some(start)) => format!("{}:{start}: {err}", data.path.display()),
        (None, None) => format!("{}: {err}", data.path.display()),
    };
    Failure::new(ExitStatus::Expansion, message)
}

fn write_out(stdout: &mut dyn Write, text: &str) -> Outcome {
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::new(ExitStatus::Io, format!("cannot write to standard output: {e}")))
}

fn valid_file_stem(name: &str) -> bool {
    !name.is_empty() && name != "." && name != ".." && !name.contains(['/', '\\', '\0'])
}

pub fn cmd_generate(cfg: &RunConfig, stdout: &mut dyn Write) -> Outcome {
    let data_path = required(&cfg.data_path, "--data", cfg)?;
    let (template_path, template) = load_template(cfg)?;
    let data = load_records(data_path)?;
    let units = expand_all(&template, &data.records, &cfg.name_key)
        .map_err(|e| expansion_failure(e, &template_path, &data))?;

    if let Some(bad) = units.iter().find(|u| !valid_file_stem(&u.name)) {
        return Err(Failure::new(
            ExitStatus::Expansion,
            format!("{}: unit name `{}` is not usable as a file name", data_path.display(), bad.name),
        ));
    }

    let targets: Vec<PathBuf> = units
        .iter()
        .map(|u| cfg.out_dir.join(format!("{}{}", u.name, cfg.out_suffix)))
        .collect();
    if !cfg.overwrite {
        if let Some(existing) = targets.iter().find(|p| p.exists()) {
            return Err(Failure::new(
                ExitStatus::Io,
                format!("{} already exists (pass --overwrite to replace it)", existing.display()),
            ));
        }
    }
    fs::create_dir_all(&cfg.out_dir).map_err(|e| {
        Failure::new(ExitStatus::Io, format!("cannot create {}: {e}", cfg.out_dir.display()))
    })?;

    for (unit, path) in units.iter().zip(&targets) {
        fs::write(path, &unit.content)
            .map_err(|e| Failure::new(ExitStatus::Io, format!("cannot write {}: {e}", path.display())))?;
        write_out(stdout, &format!("{}\n", path.display()))?;
    }
    Ok(())
}

pub fn cmd_erase(cfg: &RunConfig, stdout: &mut dyn Write) -> Outcome {
    let (_, template) = load_template(cfg)?;
    write_out(stdout, &template.erase())
}

pub fn cmd_check(cfg: &RunConfig) -> Outcome {
    let (template_path, template) = load_template(cfg)?;
    if let Some(data_path) = cfg.data_path.as_deref() {
        let data = load_records(data_path)?;
        check_records(&template, &data.records, &cfg.name_key)
            .map_err(|e| expansion_failure(e, &template_path, &data))?;
    }
    Ok(())
}

pub fn cmd_tokens(cfg: &RunConfig, stdout: &mut dyn Write) -> Outcome {
    let path = required(&cfg.template_path, "--template", cfg)?;
    let source = read(path)?;
    let stream = tokenize(&source, cfg.tokenizer)
        .map_err(|e| Failure::located(ExitStatus::Template, path, e))?;
    write_out(stdout, &dump_tokens(&stream))
}

pub fn cmd_records(cfg: &RunConfig, stdout: &mut dyn Write) -> Outcome {
    let path = required(&cfg.data_path, "--data", cfg)?;
    let data = load_records(path)?;
    write_out(stdout, &dump_records(&data.records))
}
