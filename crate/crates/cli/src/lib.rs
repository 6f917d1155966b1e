//! Command-line front end: argument model, dispatch and output rendering.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use orblab::groups::{build_group, parse_group_spec, DEFAULT_BUDGET};
use orblab::orbits::{bn_table, fn_table, oligomorphic_check, OrbitTable};
use orblab::rational::{format_rational, ln_biguint, parse_rational, serde_biguint};
use orblab::scalar::DEFAULT_PRECISION;
use orblab::series::{cycle_index_character, e8cubed_character, sym_limit_character};
use orblab::structure::{
    fixed_point_table, freeness_report, jacobi_check, limit_table, resolve_seed, ConstantTable, Seed,
};
use orblab::twisted::{min_twisted_weight, orbifold_limit_report, OrbifoldRow};
use orblab::{CycleIndex, GroupKind, OrbError, PermGroupHandle, Scalar, TruncatedSeries};

pub const BUDGET_ENV: &str = "ORBLAB_BUDGET";
pub const MAX_NMAX: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    Character,
    Bn,
    Fn,
    Oligo,
    Constants,
    Limit,
    Jacobi,
    Twisted,
    Figure1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "orblab", version, about = "Fixed-point characters, orbit counts and structure constants of permutation orbifolds")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandName,
    /// S:<N>, Z:<N>, GL:<N>:<q>; family commands also take S, Z, GL:<q> (and S:inf for character)
    #[arg(long)]
    pub group: Option<String>,
    /// vac, unit1, heis:<cutoff>, e8cubed or a seed JSON file
    #[arg(long)]
    pub seed: Option<String>,
    /// Largest weight n (series order, weight cap for constants)
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    /// Largest N for family sweeps; N of the GL column for figure1
    #[arg(long = "Nmax")]
    pub big_nmax: Option<u32>,
    /// Central charge, "p" or "p/q"
    #[arg(long, default_value = "24")]
    pub c: String,
    /// Element budget (overrides ORBLAB_BUDGET)
    #[arg(long)]
    pub budget: Option<u64>,
    /// Bits for approximate renderings
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// limit: report single-trace freeness instead of the limit table
    #[arg(long)]
    pub freeness: bool,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandName,
    pub group: Option<String>,
    pub seed: Option<String>,
    pub n_max: usize,
    pub big_n_max: Option<u32>,
    pub c: BigRational,
    pub budget: u64,
    pub precision: u32,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub freeness: bool,
}

#[derive(Debug)]
pub enum CliError {
    Orb(OrbError),
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Orb(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<OrbError> for CliError {
    fn from(e: OrbError) -> Self {
        CliError::Orb(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Orb(OrbError::Validation(_)) | CliError::Orb(OrbError::LimitAnomaly(_)) => 2,
            CliError::Orb(OrbError::Budget { .. }) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    /// `env_budget` is the value of `ORBLAB_BUDGET`, if set.
    pub fn from_cli(cli: Cli, env_budget: Option<String>) -> CliResult<Self> {
        let budget = match (cli.budget, env_budget) {
            (Some(b), _) => b,
            (None, Some(s)) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={s:?} is not a positive integer")))?,
            (None, None) => DEFAULT_BUDGET,
        };
        if budget == 0 {
            return Err(CliError::Usage("budget must be positive".into()));
        }
        if cli.nmax > MAX_NMAX {
            return Err(CliError::Usage(format!("--nmax {} exceeds the guard {MAX_NMAX}", cli.nmax)));
        }
        if cli.precision == 0 {
            return Err(CliError::Usage("precision must be positive".into()));
        }
        let c = parse_rational(&cli.c)?;
        if c.is_negative() {
            return Err(CliError::Usage("central charge must be non-negative".into()));
        }
        Ok(RunConfig {
            command: cli.command,
            group: cli.group,
            seed: cli.seed,
            n_max: cli.nmax,
            big_n_max: cli.big_nmax,
            c,
            budget,
            precision: cli.precision,
            out: cli.out,
            format: cli.format,
            freeness: cli.freeness,
        })
    }
}

/// What a command produced. `failure` carries a validation witness; the body
/// is still written before the process exits with status 2.
#[derive(Debug, Default)]
pub struct Outcome {
    pub body: String,
    pub notes: Vec<String>,
    pub failure: Option<String>,
}

/// A group argument: a family, optionally with a fixed N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupArg {
    pub kind: GroupKind,
    pub n: Option<u32>,
}

pub fn parse_group_arg(spec: &str) -> CliResult<GroupArg> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let bad = || CliError::Orb(OrbError::Parse(format!("malformed group spec {spec:?}")));
    let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
    Ok(match parts.as_slice() {
        ["S"] | ["S", "inf"] => GroupArg { kind: GroupKind::Symmetric, n: None },
        ["Z"] => GroupArg { kind: GroupKind::Cyclic, n: None },
        ["GL", q] => GroupArg { kind: GroupKind::GeneralLinear { q: num(q)? }, n: None },
        _ => {
            let g = parse_group_spec(spec)?;
            GroupArg { kind: g.kind(), n: Some(g.n()) }
        }
    })
}

impl RunConfig {
    fn group_arg(&self) -> CliResult<GroupArg> {
        let spec = self.group.as_deref().ok_or_else(|| CliError::Usage("--group is required".into()))?;
        parse_group_arg(spec)
    }

    fn fixed_group(&self) -> CliResult<PermGroupHandle> {
        let spec = self.group.as_deref().ok_or_else(|| CliError::Usage("--group is required".into()))?;
        Ok(parse_group_spec(spec)?.with_budget(self.budget))
    }

    fn seed(&self, default: &str) -> CliResult<Seed> {
        Ok(resolve_seed(self.seed.as_deref().unwrap_or(default))?)
    }

    fn seed_table(&self) -> CliResult<ConstantTable> {
        Ok(self.seed("unit1")?.table()?.clone())
    }

    /// Groups of a `bn`/`fn` run: the named group, or N = 1..=Nmax.
    fn groups(&self) -> CliResult<Vec<PermGroupHandle>> {
        let arg = self.group_arg()?;
        match (arg.n, self.big_n_max) {
            (Some(n), None) => Ok(vec![build_group(arg.kind, n)?.with_budget(self.budget)]),
            (_, Some(top)) => (1..=top)
                .map(|n| Ok(build_group(arg.kind, n)?.with_budget(self.budget)))
                .collect(),
            (None, None) => Err(CliError::Usage("a family group needs --Nmax".into())),
        }
    }
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn json_string<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Io(e.to_string()))
}

/// Decimal rendering of `r` with `digits` fractional digits, rounded half away from zero.
pub fn decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (r.abs() * BigRational::from_integer(scale.clone()) + BigRational::new(1.into(), 2.into())).floor();
    let n = scaled.to_integer();
    let int_part = &n / &scale;
    let frac = (&n % &scale).to_string();
    let sign = if r.is_negative() && !n.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

fn digits_for(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

pub fn render_scalar(s: &Scalar, bits: u32) -> String {
    decimal(&s.approximate(bits), digits_for(bits))
}

fn orbit_csv(t: &OrbitTable) -> CliResult<String> {
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            vec![r.family.clone(), r.seed.clone(), r.n.to_string(), r.big_n.to_string(), r.count.to_string(), r.kind.to_string()]
        })
        .collect();
    csv_string(&["family", "seed", "n", "N", "count", "kind"], &rows)
}

fn table_output(t: &ConstantTable, cfg: &RunConfig) -> CliResult<String> {
    match cfg.format {
        Format::Json => Ok(t.to_json() + "\n"),
        Format::Csv => {
            let labels = t.labels();
            let mut rows = Vec::new();
            for a in 0..labels.len() {
                for b in 0..labels.len() {
                    for c in 0..labels.len() {
                        if let Some(v) = t.get_ref(&[a, b, c]) {
                            if v.is_zero() {
                                continue;
                            }
                            rows.push(vec![
                                labels[a].id.clone(),
                                labels[b].id.clone(),
                                labels[c].id.clone(),
                                v.to_string(),
                                render_scalar(v, cfg.precision),
                            ]);
                        }
                    }
                }
            }
            csv_string(&["a", "b", "c", "value", "approx"], &rows)
        }
    }
}

/// JSON form of the `character` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterOutput {
    pub group: String,
    pub seed: String,
    pub cycle_index: Option<CycleIndex>,
    pub character: TruncatedSeries,
}

fn run_character(cfg: &RunConfig) -> CliResult<Outcome> {
    let seed = cfg.seed("unit1")?;
    let a = seed.character(cfg.n_max);
    let arg = cfg.group_arg()?;
    let (group, z, chi) = match (arg.kind, arg.n) {
        (GroupKind::Symmetric, None) => ("S:inf".to_string(), None, sym_limit_character(&a, cfg.n_max)?),
        (_, None) => return Err(CliError::Usage("character needs a concrete group or S:inf".into())),
        (_, Some(_)) => {
            let g = cfg.fixed_group()?;
            let z = g.cycle_index()?;
            let chi = cycle_index_character(&z, &a, cfg.n_max)?;
            (g.spec(), Some(z), chi)
        }
    };
    let out = CharacterOutput { group, seed: seed.name(), cycle_index: z, character: chi };
    let body = match cfg.format {
        Format::Json => json_string(&out)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                out.character.coeffs().iter().enumerate().map(|(n, c)| vec![n.to_string(), format_rational(c)]).collect();
            csv_string(&["n", "coefficient"], &rows)?
        }
    };
    Ok(Outcome { body, ..Default::default() })
}

fn run_counts(cfg: &RunConfig, bn: bool) -> CliResult<Outcome> {
    let seed = cfg.seed("unit1")?;
    let a = seed.character(cfg.n_max);
    let mut table = OrbitTable::default();
    for g in cfg.groups()? {
        table.extend(if bn { bn_table(&g, &a, &seed.name(), cfg.n_max)? } else { fn_table(&g, cfg.n_max)? });
    }
    let body = match cfg.format {
        Format::Json => json_string(&table)?,
        Format::Csv => orbit_csv(&table)?,
    };
    Ok(Outcome { body, ..Default::default() })
}

fn run_oligo(cfg: &RunConfig) -> CliResult<Outcome> {
    let arg = cfg.group_arg()?;
    let top = cfg.big_n_max.or(arg.n).unwrap_or(4);
    let seed = cfg.seed("unit1")?;
    let a = seed.character(cfg.n_max);
    let report = oligomorphic_check(arg.kind, &a, &seed.name(), cfg.n_max, top, cfg.budget)?;
    let mut notes = vec![format!("verdict: {}", report.verdict)];
    if !report.skipped.is_empty() {
        notes.push(format!("skipped N (over budget): {:?}", report.skipped));
    }
    let body = match cfg.format {
        Format::Json => json_string(&report)?,
        Format::Csv => orbit_csv(&report.table)?,
    };
    Ok(Outcome { body, notes, failure: None })
}

fn run_constants(cfg: &RunConfig) -> CliResult<Outcome> {
    let g = cfg.fixed_group()?;
    let seed = cfg.seed_table()?;
    let t = fixed_point_table(&g, &seed, cfg.n_max as u32)?;
    Ok(Outcome { body: table_output(&t, cfg)?, ..Default::default() })
}

fn run_limit(cfg: &RunConfig) -> CliResult<Outcome> {
    let arg = cfg.group_arg()?;
    let seed = cfg.seed_table()?;
    if cfg.freeness {
        let r = freeness_report(arg.kind, &seed, cfg.n_max as u32, cfg.budget)?;
        let notes = vec![format!("verdict: {}", r.verdict)];
        let body = match cfg.format {
            Format::Json => json_string(&r)?,
            Format::Csv => {
                let rows: Vec<Vec<String>> = r
                    .single_trace
                    .iter()
                    .map(|e| vec![e.states[0].clone(), e.states[1].clone(), e.states[2].clone(), e.value.clone()])
                    .collect();
                csv_string(&["x", "y", "z", "limit"], &rows)?
            }
        };
        return Ok(Outcome { body, notes, failure: None });
    }
    let t = limit_table(arg.kind, &seed, cfg.n_max as u32, cfg.budget)?;
    Ok(Outcome { body: table_output(&t, cfg)?, ..Default::default() })
}

fn run_jacobi(cfg: &RunConfig) -> CliResult<Outcome> {
    let seed = cfg.seed_table()?;
    let cap = cfg.n_max as u32;
    let table = match &cfg.group {
        None => seed,
        Some(spec) => {
            let arg = parse_group_arg(spec)?;
            match arg.n {
                Some(_) => fixed_point_table(&cfg.fixed_group()?, &seed, cap)?,
                None => limit_table(arg.kind, &seed, cap, cfg.budget)?,
            }
        }
    };
    let r = jacobi_check(&table, cap)?;
    let body = match cfg.format {
        Format::Json => json_string(&r)?,
        Format::Csv => csv_string(
            &["table", "requested_cap", "effective_cap", "checked", "failure_count", "passed"],
            &[vec![
                r.table.clone(),
                r.requested_cap.to_string(),
                r.effective_cap.to_string(),
                r.checked.to_string(),
                r.failure_count.to_string(),
                r.passed.to_string(),
            ]],
        )?,
    };
    let failure = r
        .failures
        .first()
        .map(|w| format!("Jacobi identity fails in {} at {w} ({} failures)", r.table, r.failure_count));
    Ok(Outcome { body, notes: vec![], failure })
}

fn ratio_cells(r: &Option<BigRational>) -> [String; 2] {
    match r {
        Some(r) => [r.numer().to_string(), r.denom().to_string()],
        None => [String::new(), String::new()],
    }
}

fn twisted_csv(rows: &[OrbifoldRow]) -> CliResult<String> {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let [mn, md] = ratio_cells(&r.min_rho);
            let [bn, bd] = ratio_cells(&r.bound);
            vec![
                r.group.clone(),
                r.n.to_string(),
                r.q.map(|q| q.to_string()).unwrap_or_default(),
                format_rational(&r.c),
                mn,
                md,
                bn,
                bd,
                r.attained_by.clone(),
            ]
        })
        .collect();
    csv_string(
        &["group", "N", "q", "c", "min_rho_num", "min_rho_den", "bound_num", "bound_den", "attained_by_cycle_type"],
        &rows,
    )
}

fn run_twisted(cfg: &RunConfig) -> CliResult<Outcome> {
    let arg = cfg.group_arg()?;
    let q = match arg.kind {
        GroupKind::GeneralLinear { q } => Some(q),
        _ => None,
    };
    if let (Some(n), None) = (arg.n, cfg.big_n_max) {
        let g = cfg.fixed_group()?;
        let r = min_twisted_weight(&g, &cfg.c)?;
        let mut notes = Vec::new();
        if let Some(m) = &r.min_rho {
            notes.push(format!("min rho = {} attained by {}", format_rational(m), r.attained_by.join(" ")));
        }
        if r.gl_bound_equality == Some(true) {
            notes.push("equality: min rho = (q-1)Nc/32".into());
        }
        let failure = if !r.moved_bound_holds || r.gl_bound_holds == Some(false) {
            Some(format!("twisted weight bound fails for {}", r.group))
        } else {
            None
        };
        let body = match cfg.format {
            Format::Json => json_string(&r)?,
            Format::Csv => twisted_csv(&[OrbifoldRow::from_report(&r, n, q)])?,
        };
        return Ok(Outcome { body, notes, failure });
    }
    let top = cfg.big_n_max.or(arg.n).ok_or_else(|| CliError::Usage("a family needs --Nmax".into()))?;
    let ns: Vec<u32> = (2..=top).collect();
    let r = orbifold_limit_report(arg.kind, &cfg.c, &ns, cfg.budget)?;
    let failure = if r.bound_holds {
        None
    } else {
        r.rows
            .iter()
            .find(|x| matches!((&x.min_rho, &x.bound), (Some(m), Some(b)) if m < b))
            .map(|x| format!("twisted weight bound fails for {}", x.group))
    };
    let body = match cfg.format {
        Format::Json => json_string(&r)?,
        Format::Csv => twisted_csv(&r.rows)?,
    };
    Ok(Outcome { body, notes: vec![format!("verdict: {}", r.verdict)], failure })
}

pub const FIGURE1_NOTE: &str = "b_S is the S_N fixed-point limit only; twisted sectors of the S_N orbifold are not included";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub n: u32,
    #[serde(with = "serde_biguint")]
    pub b_s: num_bigint::BigUint,
    #[serde(with = "serde_biguint")]
    pub b_gl: num_bigint::BigUint,
    pub log_b_s: f64,
    pub log_b_gl: f64,
    /// `log(b_GL)/n^2`, absent at n = 0.
    pub alpha_gl: Option<f64>,
    /// `n > N` for the GL column: not yet stabilized.
    pub provisional: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure1Data {
    pub note: String,
    pub seed: String,
    pub gl_group: String,
    pub rows: Vec<Figure1Row>,
}

pub fn figure1_data(seed: &Seed, n_max: usize, gl_n: u32, budget: u64) -> orblab::Result<Figure1Data> {
    let a = match seed {
        Seed::Character { name } if name == "e8cubed" => e8cubed_character(n_max),
        s => s.character(n_max),
    };
    let s_col = sym_limit_character(&a, n_max)?
        .to_biguints()
        .ok_or_else(|| OrbError::Invalid("seed character must be integral".into()))?;
    let g = build_group(GroupKind::GeneralLinear { q: 2 }, gl_n)?.with_budget(budget);
    let gl_col = bn_table(&g, &a, &seed.name(), n_max)?.counts();
    let rows = s_col
        .into_iter()
        .zip(gl_col)
        .enumerate()
        .map(|(n, (b_s, b_gl))| {
            let log_b_gl = ln_biguint(&b_gl);
            Figure1Row {
                n: n as u32,
                log_b_s: ln_biguint(&b_s),
                log_b_gl,
                alpha_gl: (n > 0).then(|| log_b_gl / (n * n) as f64),
                provisional: n as u32 > gl_n,
                b_s,
                b_gl,
            }
        })
        .collect();
    Ok(Figure1Data { note: FIGURE1_NOTE.into(), seed: seed.name(), gl_group: g.spec(), rows })
}

fn run_figure1(cfg: &RunConfig) -> CliResult<Outcome> {
    let seed = cfg.seed("e8cubed")?;
    let gl_n = cfg.big_n_max.unwrap_or(4);
    if gl_n > 5 {
        return Err(CliError::Usage(format!("figure1 supports N <= 5 for the GL column, got {gl_n}")));
    }
    let data = figure1_data(&seed, cfg.n_max, gl_n, cfg.budget)?;
    let failure = data
        .rows
        .iter()
        .find(|r| r.n >= 1 && r.b_gl < r.b_s)
        .map(|r| format!("GL column below S column at n = {}: {} < {}", r.n, r.b_gl, r.b_s));
    let mut notes = vec![format!("note: {FIGURE1_NOTE}")];
    if data.rows.iter().any(|r| r.provisional) {
        notes.push(format!("rows with n > {gl_n} are provisional"));
    }
    let body = match cfg.format {
        Format::Json => json_string(&data)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = data
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.b_s.to_string(),
                        r.b_gl.to_string(),
                        format!("{:.12}", r.log_b_s),
                        format!("{:.12}", r.log_b_gl),
                        r.alpha_gl.map(|x| format!("{x:.12}")).unwrap_or_default(),
                        r.provisional.to_string(),
                    ]
                })
                .collect();
            format!(
                "# {FIGURE1_NOTE}\n{}",
                csv_string(&["n", "b_S", "b_GL", "log_b_S", "log_b_GL", "alpha_GL", "provisional"], &rows)?
            )
        }
    };
    Ok(Outcome { body, notes, failure })
}

pub fn dispatch(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command {
        CommandName::Character => run_character(cfg),
        CommandName::Bn => run_counts(cfg, true),
        CommandName::Fn => run_counts(cfg, false),
        CommandName::Oligo => run_oligo(cfg),
        CommandName::Constants => run_constants(cfg),
        CommandName::Limit => run_limit(cfg),
        CommandName::Jacobi => run_jacobi(cfg),
        CommandName::Twisted => run_twisted(cfg),
        CommandName::Figure1 => run_figure1(cfg),
    }
}

/// Writes the body to `--out` or stdout; returns the exit status.
pub fn run(cfg: &RunConfig) -> i32 {
    let outcome = match dispatch(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(outcome.body.as_bytes()).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 1;
    }
    for n in &outcome.notes {
        eprintln!("{n}");
    }
    match outcome.failure {
        Some(w) => {
            eprintln!("validation failed: {w}");
            2
        }
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&parse_rational("1/3").unwrap(), 4), "0.3333");
        assert_eq!(decimal(&parse_rational("-2/3").unwrap(), 3), "-0.667");
        assert_eq!(decimal(&parse_rational("5").unwrap(), 0), "5");
        assert_eq!(decimal(&parse_rational("1/200").unwrap(), 2), "0.01");
    }

    #[test]
    fn group_arguments() {
        assert_eq!(parse_group_arg("GL:2").unwrap(), GroupArg { kind: GroupKind::GeneralLinear { q: 2 }, n: None });
        assert_eq!(parse_group_arg("GL:3:2").unwrap(), GroupArg { kind: GroupKind::GeneralLinear { q: 2 }, n: Some(3) });
        assert_eq!(parse_group_arg("S:inf").unwrap().n, None);
        assert!(parse_group_arg("Q:3").is_err());
    }

    #[test]
    fn budget_precedence() {
        let cli = Cli::try_parse_from(["orblab", "bn", "--group", "S:3"]).unwrap();
        assert_eq!(RunConfig::from_cli(cli, Some("77".into())).unwrap().budget, 77);
        let cli = Cli::try_parse_from(["orblab", "bn", "--group", "S:3", "--budget", "5"]).unwrap();
        assert_eq!(RunConfig::from_cli(cli, Some("77".into())).unwrap().budget, 5);
        let cli = Cli::try_parse_from(["orblab", "bn", "--group", "S:3"]).unwrap();
        assert_eq!(RunConfig::from_cli(cli, None).unwrap().budget, DEFAULT_BUDGET);
        let cli = Cli::try_parse_from(["orblab", "bn", "--nmax", "65"]).unwrap();
        assert!(RunConfig::from_cli(cli, None).is_err());
    }
}
