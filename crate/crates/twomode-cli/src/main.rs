//! Batch command-line front end for the twomode toolkit.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use twomode::states::{self, SpecError, StateSpec};
use twomode::survey::{self, io as fmt_io};
use twomode::witness::{self, WitnessError};
use twomode::{fock, Tolerances, DEFAULT_TOL, DEFAULT_WITNESS_TOL};

/// Tail bound above which an explicit `--cutoff` draws a warning.
const CUTOFF_WARN_TAIL: f64 = 1e-12;

const ENV_TOLERANCE: &str = "TWOMODE_TOLERANCE";

#[derive(Parser)]
#[command(
    name = "twomode",
    version,
    about = "Two-mode entangled states: construction, moments, and separability criteria",
    propagate_version = true
)]
struct Cli {
    /// Config file supplying defaults for tolerances, cutoff, out, format
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write the machine-readable output here (atomically, with a .meta sidecar)
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format for witness reports
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,

    /// Numeric consistency tolerance (default 1e-9; env TWOMODE_TOLERANCE)
    #[arg(long, global = true, value_name = "TOL")]
    tol_numeric: Option<f64>,

    /// Witness verdict margin tolerance (default 1e-7)
    #[arg(long, global = true, value_name = "TOL")]
    tol_witness: Option<f64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a state and summarize it (norm, tail, band, Schmidt data)
    State {
        #[command(subcommand)]
        family: FamilyCmd,
    },
    /// Evaluate all separability criteria on a state or a moment-table file
    Witness {
        #[command(subcommand)]
        family: Option<FamilyCmd>,
        /// Evaluate a moment-table file instead of constructing a state
        #[arg(long, value_name = "FILE")]
        table: Option<PathBuf>,
    },
    /// Sweep a detectability region over a photon-number grid
    Sweep {
        #[command(subcommand)]
        region: RegionCmd,
    },
    /// Enumerate photon-number pairs invisible to the fourth-order witness
    Blind {
        /// Largest photon number to scan (pairs with m < n <= limit)
        #[arg(long)]
        limit: u64,
        /// Cross-validate the recurrence against the exhaustive scan
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand, Clone)]
enum FamilyCmd {
    /// Two-mode squeezed number state |M,N;xi>
    Tmsn {
        #[arg(long = "M", value_name = "INT")]
        photons_a: u32,
        #[arg(long = "N", value_name = "INT")]
        photons_b: u32,
        /// Squeezing parameter: real like 0.7 or complex like 0.5+0.2i
        #[arg(long, allow_hyphen_values = true, value_name = "COMPLEX")]
        xi: Option<String>,
        /// Polar form: modulus (pair with --xi-arg)
        #[arg(long, conflicts_with = "xi", value_name = "FLOAT")]
        xi_abs: Option<f64>,
        /// Polar form: argument in radians
        #[arg(
            long,
            conflicts_with = "xi",
            allow_hyphen_values = true,
            value_name = "FLOAT"
        )]
        xi_arg: Option<f64>,
        /// Override the automatic lattice cutoff
        #[arg(long, value_name = "INT")]
        cutoff: Option<usize>,
    },
    /// Beamsplitted number state |n,m;r>
    Bsn {
        #[arg(long = "n", value_name = "INT")]
        photons_a: u32,
        #[arg(long = "m", value_name = "INT")]
        photons_b: u32,
        /// Beamsplitter parameter: real like 1 or complex like 2+0.5i
        #[arg(long, allow_hyphen_values = true, value_name = "COMPLEX")]
        r: Option<String>,
        /// Polar form: modulus (pair with --r-arg)
        #[arg(long, conflicts_with = "r", value_name = "FLOAT")]
        r_abs: Option<f64>,
        /// Polar form: argument in radians
        #[arg(
            long,
            conflicts_with = "r",
            allow_hyphen_values = true,
            value_name = "FLOAT"
        )]
        r_arg: Option<f64>,
        /// Override the automatic lattice cutoff
        #[arg(long, value_name = "INT")]
        cutoff: Option<usize>,
    },
}

#[derive(Subcommand, Clone)]
enum RegionCmd {
    /// Second-moment detectability of |M,N;xi> over [0,max]²
    TmsnRegion {
        #[arg(long, allow_hyphen_values = true, value_name = "COMPLEX")]
        xi: String,
        #[arg(long, value_name = "INT")]
        max: u32,
        /// Numerically re-check this many randomly chosen cells
        #[arg(long, default_value_t = 0, value_name = "INT")]
        confirm: usize,
    },
    /// Hillery–Zubairy detectability of |n,m;r> over [0,max]²
    HzRegion {
        #[arg(long, allow_hyphen_values = true, value_name = "COMPLEX")]
        r: String,
        #[arg(long, value_name = "INT")]
        max: u32,
        #[arg(long, default_value_t = 0, value_name = "INT")]
        confirm: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Csv,
}

enum CliError {
    /// Bad parameters or domains: exit 2.
    Param(String),
    /// Unreadable or malformed input file: exit 3.
    InputFile(String),
    /// Output could not be written: exit 1.
    WriteFile(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) => 2,
            CliError::InputFile(_) => 3,
            CliError::WriteFile(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Param(m) | CliError::InputFile(m) | CliError::WriteFile(m) => m,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Param(e.to_string())
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        CliError::Param(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

/// Resolved knobs after flag > config file > environment > default.
struct RunConfig {
    tol: Tolerances,
    out: Option<PathBuf>,
    format: OutFormat,
    cutoff: Option<usize>,
}

#[derive(Default)]
struct FileConfig {
    tol_numeric: Option<f64>,
    tol_witness: Option<f64>,
    out: Option<PathBuf>,
    format: Option<OutFormat>,
    cutoff: Option<usize>,
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::InputFile(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or(CliError::InputFile(format!(
        "{}: empty config",
        path.display()
    )))?;
    if header != "twomode.config v1" {
        return Err(CliError::InputFile(format!(
            "{}: expected header 'twomode.config v1', found '{header}'",
            path.display()
        )));
    }
    let mut cfg = FileConfig::default();
    for (line, content) in lines {
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (key, value) = content
            .split_once(char::is_whitespace)
            .map(|(k, v)| (k, v.trim()))
            .ok_or(CliError::InputFile(format!(
                "{}:{line}: expected 'key value', found '{content}'",
                path.display()
            )))?;
        let bad = |what: &str| {
            CliError::InputFile(format!(
                "{}:{line}: malformed {what}: '{value}'",
                path.display()
            ))
        };
        match key {
            "tol_numeric" => cfg.tol_numeric = Some(value.parse().map_err(|_| bad("float"))?),
            "tol_witness" => cfg.tol_witness = Some(value.parse().map_err(|_| bad("float"))?),
            "cutoff" => cfg.cutoff = Some(value.parse().map_err(|_| bad("integer"))?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "format" => {
                cfg.format = Some(match value {
                    "text" => OutFormat::Text,
                    "csv" => OutFormat::Csv,
                    _ => return Err(bad("format (text|csv)")),
                })
            }
            _ => {
                return Err(CliError::InputFile(format!(
                    "{}:{line}: unknown config key '{key}'",
                    path.display()
                )))
            }
        }
    }
    Ok(cfg)
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.config {
        Some(path) => read_config(path)?,
        None => FileConfig::default(),
    };
    let env_tol = match std::env::var(ENV_TOLERANCE) {
        Ok(v) => Some(
            v.parse::<f64>()
                .map_err(|_| CliError::Param(format!("{ENV_TOLERANCE}: malformed float '{v}'")))?,
        ),
        Err(_) => None,
    };
    let numeric = cli
        .tol_numeric
        .or(file.tol_numeric)
        .or(env_tol)
        .unwrap_or(DEFAULT_TOL);
    let witness = cli
        .tol_witness
        .or(file.tol_witness)
        .unwrap_or(DEFAULT_WITNESS_TOL);
    if !(numeric.is_finite() && numeric > 0.0 && witness.is_finite() && witness > 0.0) {
        return Err(CliError::Param(
            "tolerances must be finite and positive".into(),
        ));
    }
    Ok(RunConfig {
        tol: Tolerances { numeric, witness },
        out: cli.out.clone().or(file.out),
        format: cli.format.or(file.format).unwrap_or(OutFormat::Text),
        cutoff: file.cutoff,
    })
}

// ---------------------------------------------------------------------------
// complex parameter parsing
// ---------------------------------------------------------------------------

/// Accepts `0.7`, `-0.3`, `0.5+0.2i`, `1e-3-2e-4i`, `0.2i`, `i`.
fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = s.strip_suffix(['i', 'I']) else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| {
            format!("malformed complex literal '{s}' (expected forms: 0.7, 0.5+0.2i, 0.2i)")
        });
    };
    // find the +/- separating re from im, skipping a leading sign and any
    // exponent signs (preceded by e/E)
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => im_str.parse::<f64>(),
    };
    match (re_str.parse::<f64>(), im) {
        (Ok(re), Ok(im)) => Ok(C64::new(re, im)),
        _ => Err(format!(
            "malformed complex literal '{s}' (expected forms: 0.7, 0.5+0.2i, 0.2i)"
        )),
    }
}

fn resolve_parameter(
    name: &str,
    cartesian: &Option<String>,
    polar_abs: &Option<f64>,
    polar_arg: &Option<f64>,
) -> Result<C64, CliError> {
    match (cartesian, polar_abs, polar_arg) {
        (Some(s), None, None) => parse_complex(s).map_err(CliError::Param),
        (None, Some(abs), arg) => Ok(C64::from_polar(*abs, arg.unwrap_or(0.0))),
        (None, None, Some(_)) => Err(CliError::Param(format!(
            "--{name}-arg requires --{name}-abs"
        ))),
        (None, None, None) => Err(CliError::Param(format!(
            "missing --{name} (or --{name}-abs/--{name}-arg)"
        ))),
        _ => Err(CliError::Param(format!(
            "--{name} conflicts with --{name}-abs/--{name}-arg"
        ))),
    }
}

impl FamilyCmd {
    fn to_spec(&self) -> Result<(StateSpec, Option<usize>), CliError> {
        match self {
            FamilyCmd::Tmsn {
                photons_a,
                photons_b,
                xi,
                xi_abs,
                xi_arg,
                cutoff,
            } => {
                let xi = resolve_parameter("xi", xi, xi_abs, xi_arg)?;
                let spec = StateSpec::Tmsn {
                    photons_a: *photons_a,
                    photons_b: *photons_b,
                    xi,
                };
                spec.validate()?;
                Ok((spec, *cutoff))
            }
            FamilyCmd::Bsn {
                photons_a,
                photons_b,
                r,
                r_abs,
                r_arg,
                cutoff,
            } => {
                let r = resolve_parameter("r", r, r_abs, r_arg)?;
                let spec = StateSpec::Bsn {
                    photons_a: *photons_a,
                    photons_b: *photons_b,
                    r,
                };
                spec.validate()?;
                Ok((spec, *cutoff))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

/// Write the data file atomically (temp file + rename) along with a `.meta`
/// sidecar describing the run. Data files stay free of environment noise so
/// identical invocations are byte-identical.
fn emit(out: &Option<PathBuf>, data: &str, meta: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{data}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            let write_err =
                |e: std::io::Error| CliError::WriteFile(format!("{}: {e}", path.display()));
            let mut f = fs::File::create(&tmp).map_err(write_err)?;
            f.write_all(data.as_bytes()).map_err(write_err)?;
            f.sync_all().map_err(write_err)?;
            fs::rename(&tmp, path).map_err(write_err)?;
            let meta_path = sidecar_path(path);
            fs::write(&meta_path, meta)
                .map_err(|e| CliError::WriteFile(format!("{}: {e}", meta_path.display())))?;
            Ok(())
        }
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta");
    path.with_file_name(name)
}

fn meta_for(invocation: &str, cfg: &RunConfig) -> String {
    format!(
        "twomode.meta v1\ntool twomode {}\ninvocation {}\ntol_numeric {:e}\ntol_witness {:e}\n",
        env!("CARGO_PKG_VERSION"),
        invocation,
        cfg.tol.numeric,
        cfg.tol.witness,
    )
}

fn fmt_complex(z: C64) -> String {
    format!("({:e}, {:e})", z.re, z.im)
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve_config(&cli)?;
    match &cli.cmd {
        Cmd::State { family } => cmd_state(family, &cfg),
        Cmd::Witness { family, table } => cmd_witness(family, table, &cfg),
        Cmd::Sweep { region } => cmd_sweep(region, &cfg),
        Cmd::Blind { limit, verify } => cmd_blind(*limit, *verify, &cfg),
    }
}

fn build_state(
    spec: &StateSpec,
    explicit_cutoff: Option<usize>,
    cfg: &RunConfig,
    moment_order: u32,
) -> Result<fock::FockState, CliError> {
    let cutoff = explicit_cutoff.or(cfg.cutoff);
    let state = match cutoff {
        Some(c) => states::build_at(spec, c)?,
        None => states::build(spec, moment_order)?,
    };
    if cutoff.is_some() && state.tail_bound() > CUTOFF_WARN_TAIL {
        eprintln!(
            "warning: explicit cutoff {} leaves tail bound {:e} (> {CUTOFF_WARN_TAIL:e}); \
             moments may lose accuracy",
            state.cutoff(),
            state.tail_bound()
        );
    }
    Ok(state)
}

fn cmd_state(family: &FamilyCmd, cfg: &RunConfig) -> Result<(), CliError> {
    let (spec, explicit_cutoff) = family.to_spec()?;
    let state = build_state(&spec, explicit_cutoff, cfg, 2)?;
    let profile = states::schmidt_profile(&state);
    let band = states::band_structure(&state);

    let mut summary = String::new();
    summary.push_str(&format!("state    {}\n", spec.label()));
    summary.push_str(&format!("cutoff   {}\n", state.cutoff()));
    summary.push_str(&format!("norm²    {:.15}\n", state.norm_sqr()));
    summary.push_str(&format!("tail     {:e}\n", state.tail_bound()));
    match (band.diagonal_offset, band.antidiagonal_total) {
        (_, Some(t)) => summary.push_str(&format!("support  anti-diagonal n_a + n_b = {t}\n")),
        (Some(d), None) => summary.push_str(&format!("support  diagonal n_a − n_b = {d}\n")),
        (None, None) => summary.push_str("support  no single band\n"),
    }
    // a rank filling the whole support band means the true rank is larger
    // than the lattice can express (infinite for the squeezed family)
    let band_len = match (band.diagonal_offset, band.antidiagonal_total) {
        (_, Some(t)) => t.min(state.cutoff()) + 1,
        (Some(d), None) => state.cutoff() + 1 - d.unsigned_abs() as usize,
        (None, None) => state.cutoff() + 1,
    };
    let truncation_limited = profile.rank == band_len && band.antidiagonal_total.is_none();
    summary.push_str(&format!(
        "schmidt  rank {}{}\n",
        profile.rank,
        if truncation_limited {
            " (truncation-limited)"
        } else {
            ""
        }
    ));
    let head: Vec<String> = profile
        .coefficients
        .iter()
        .zip(&profile.basis_labels)
        .take(4)
        .map(|(coef, (na, nb))| format!("{coef:.6} @ ({na},{nb})"))
        .collect();
    summary.push_str(&format!(
        "         leading coefficients: {}\n",
        head.join(", ")
    ));

    let data = fmt_io::write_state(&state);
    if cfg.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    emit(
        &cfg.out,
        &data,
        &meta_for(&format!("state {}", spec.label()), cfg),
    )
}

fn cmd_witness(
    family: &Option<FamilyCmd>,
    table_path: &Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<(), CliError> {
    let (subject, reports, skipped) = match (family, table_path) {
        (Some(_), Some(_)) => {
            return Err(CliError::Param(
                "pass either a state family or --table, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Param(
                "pass a state family (tmsn/bsn) or --table FILE".into(),
            ))
        }
        (Some(f), None) => {
            let (spec, explicit_cutoff) = f.to_spec()?;
            let state = build_state(&spec, explicit_cutoff, cfg, fock::EXTENDED_MAX_ORDER)?;
            let table = fock::MomentTable::of_state(&state, fock::EXTENDED_MAX_ORDER);
            let reports = witness::full_report_on_table(&spec, &table, &cfg.tol)?;
            // truncation can push γ slightly outside the physical cone;
            // that is a warning, not an error
            let cov = fock::CovarianceMatrix::from_moment_table(&table)
                .map_err(|e| CliError::Param(e.to_string()))?;
            let min_eig = cov.min_eig_gamma_plus_i_omega();
            if min_eig < -cfg.tol.numeric {
                eprintln!(
                    "warning: covariance matrix unphysical beyond tolerance \
                     (min eig(γ+iΩ) = {min_eig:.3e}); consider a larger cutoff"
                );
            }
            (spec.label(), reports, Vec::new())
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::InputFile(format!("{}: {e}", path.display())))?;
            let table = fmt_io::read_moments(&text, cfg.tol.numeric)
                .map_err(|e| CliError::InputFile(format!("{}: {e}", path.display())))?;
            let mut reports = Vec::new();
            let mut skipped = Vec::new();
            match fock::CovarianceMatrix::from_moment_table(&table) {
                Ok(cov) => {
                    reports.push(witness::simon_criterion(&cov, &cfg.tol).map_err(CliError::from)?)
                }
                Err(e) => skipped.push(format!("simon: unavailable ({e})")),
            }
            let runs: [(&str, Result<witness::WitnessReport, WitnessError>); 4] = [
                ("hz", witness::hz_criterion(&table, &cfg.tol)),
                ("sun-a", witness::sun_condition_a(&table, &cfg.tol)),
                ("sun-b", witness::sun_condition_b(&table, &cfg.tol)),
                (
                    "sun-fourth",
                    witness::sun_condition_fourth(&table, &cfg.tol),
                ),
            ];
            for (name, run) in runs {
                match run {
                    Ok(rep) => reports.push(rep),
                    Err(WitnessError::Fock(fock::FockError::MissingMoment(m))) => {
                        skipped.push(format!("{name}: unavailable (table lacks ⟨{m}⟩)"));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            (format!("table {}", path.display()), reports, skipped)
        }
    };

    let mut summary = String::new();
    summary.push_str(&format!("subject  {subject}\n"));
    for r in &reports {
        summary.push_str(&format!(
            "{:<11} {:<21} lhs {:+.6e}  rhs {:+.6e}  margin {:+.6e}\n",
            r.criterion.label(),
            r.verdict.label(),
            r.lhs,
            r.rhs,
            r.margin
        ));
        for cc in &r.cross_checks {
            summary.push_str(&format!(
                "            cross-check {}: closed-form {} vs numeric {} (delta {:.3e}{})\n",
                cc.quantity,
                fmt_complex(cc.reference),
                fmt_complex(cc.numeric),
                cc.delta,
                if cc.within_tolerance {
                    ""
                } else {
                    "; DISAGREES"
                }
            ));
        }
    }
    for s in &skipped {
        summary.push_str(&format!("{s}\n"));
    }

    let data = match cfg.format {
        OutFormat::Text => fmt_io::write_reports(&subject, &reports),
        OutFormat::Csv => {
            let mut s = String::from("criterion,lhs,rhs,margin,verdict,inputs_hash\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{:e},{:e},{:e},{},{:016x}\n",
                    r.criterion.label(),
                    r.lhs,
                    r.rhs,
                    r.margin,
                    r.verdict.label(),
                    r.inputs_hash
                ));
            }
            s
        }
    };
    if cfg.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    emit(
        &cfg.out,
        &data,
        &meta_for(&format!("witness {subject}"), cfg),
    )
}

fn cmd_sweep(region: &RegionCmd, cfg: &RunConfig) -> Result<(), CliError> {
    let (grid, confirm) = match region {
        RegionCmd::TmsnRegion { xi, max, confirm } => {
            let xi = parse_complex(xi).map_err(CliError::Param)?;
            (survey::tmsn_region(xi, *max, *max)?, *confirm)
        }
        RegionCmd::HzRegion { r, max, confirm } => {
            let r = parse_complex(r).map_err(CliError::Param)?;
            (survey::bsn_hz_region(r, *max, *max)?, *confirm)
        }
    };

    let mut summary = format!(
        "sweep    {} parameter {} grid [0,{}]×[0,{}]\ndetectable cells {} of {} ({:.1}%)\n",
        grid.kind.label(),
        fmt_complex(grid.parameter),
        grid.row_max,
        grid.col_max,
        grid.cells.iter().filter(|c| c.detectable).count(),
        grid.cells.len(),
        100.0 * grid.coverage(),
    );
    if confirm > 0 {
        let cells = survey::subsample_cells(&grid, confirm, 0x74776f6d);
        let confirmations = survey::confirm_cells(&grid, &cells, &cfg.tol)
            .map_err(|e| CliError::Param(e.to_string()))?;
        let disagree: Vec<_> = confirmations.iter().filter(|c| !c.agree).collect();
        summary.push_str(&format!(
            "numeric confirmation: {} cells checked, {} agree\n",
            confirmations.len(),
            confirmations.len() - disagree.len()
        ));
        for d in disagree {
            summary.push_str(&format!(
                "  finding: cell ({}, {}) closed-form {} vs numeric {} (margin {:+.3e})\n",
                d.row, d.col, d.closed_form, d.numeric, d.numeric_margin
            ));
        }
    }

    let data = fmt_io::write_grid(&grid);
    if cfg.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    emit(
        &cfg.out,
        &data,
        &meta_for(
            &format!(
                "sweep {} {}",
                grid.kind.label(),
                fmt_complex(grid.parameter)
            ),
            cfg,
        ),
    )
}

fn cmd_blind(limit: u64, verify: bool, cfg: &RunConfig) -> Result<(), CliError> {
    let scan = survey::enumerate_blind_pairs(limit);
    let mut summary = format!(
        "blind pairs with 0 ≤ m < n ≤ {limit}: {}\n",
        scan.pairs.len()
    );
    for note in &scan.notes {
        summary.push_str(&format!("note: {note}\n"));
    }
    if verify {
        let exhaustive = survey::blind_pairs_exhaustive(limit);
        if exhaustive == scan.pairs {
            summary.push_str("exhaustive scan agrees with the recurrence\n");
        } else {
            return Err(CliError::Param(
                "recurrence and exhaustive scan disagree; this is a bug".into(),
            ));
        }
    }
    let data = fmt_io::write_blind(&scan);
    if cfg.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    emit(
        &cfg.out,
        &data,
        &meta_for(&format!("blind limit {limit}"), cfg),
    )
}
