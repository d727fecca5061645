//! Run configuration: a line-based `key = value` file with optional `[grid]`, `[output]`,
//! `[sweep]` and `[converge]` sections. Scenario keys live before the first section header or
//! under `[scenario]`. `#` and `;` start comments; values may be quoted. The key reference is in
//! the guide.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::cell_psi::{DEFAULT_EWALD_SPLIT, DEFAULT_MODES};
use crate::correctors::DEFAULT_RHO;
use crate::error::{Error, Result};
use crate::macro_models::PicardOptions;
use crate::reference::RadialGrading;
use crate::scenario::{
    HairSize, InitialCondition, MacroRegime, Mode, Regime, Scenario, TopBoundary, UptakeLaw,
};

/// One of the comparable models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    Reference,
    A,
    B,
    /// Standard limit, second-order reconstruction.
    A2,
    /// Distinguished limit, second-order reconstruction.
    B2,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Reference,
        ModelKind::A,
        ModelKind::B,
        ModelKind::A2,
        ModelKind::B2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Reference => "reference",
            ModelKind::A => "A",
            ModelKind::B => "B",
            ModelKind::A2 => "A2",
            ModelKind::B2 => "B2",
        }
    }

    /// Regime column of the profile table.
    pub fn regime_tag(self) -> &'static str {
        match self {
            ModelKind::Reference => "reference",
            ModelKind::A | ModelKind::A2 => "standard",
            ModelKind::B | ModelKind::B2 => "distinguished",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.tag().eq_ignore_ascii_case(s.trim()))
    }

    pub fn macro_regime(self) -> Option<MacroRegime> {
        match self {
            ModelKind::Reference => None,
            ModelKind::A | ModelKind::A2 => Some(MacroRegime::A),
            ModelKind::B | ModelKind::B2 => Some(MacroRegime::B),
        }
    }

    pub fn second_order(self) -> bool {
        matches!(self, ModelKind::A2 | ModelKind::B2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    /// Cells of the 1D macro grid on `[0, M]`.
    pub n_macro: usize,
    pub n_r: usize,
    pub n_z: usize,
    pub grading: RadialGrading,
    pub psi_modes: usize,
    pub ewald_split: f64,
    pub rho: f64,
    pub picard: PicardOptions,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_macro: 512,
            n_r: 96,
            n_z: 192,
            grading: RadialGrading::Logarithmic,
            psi_modes: DEFAULT_MODES,
            ewald_split: DEFAULT_EWALD_SPLIT,
            rho: DEFAULT_RHO,
            picard: PicardOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub slices: Vec<f64>,
    pub models: Vec<ModelKind>,
    /// Every `stride`-th time level is written; the last one always is.
    pub stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    AEps,
    Lambda,
    Epsilon,
    Kappa,
    Beta,
    DU,
}

impl SweepParam {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim() {
            "a_eps" => SweepParam::AEps,
            "lambda" => SweepParam::Lambda,
            "epsilon" => SweepParam::Epsilon,
            "kappa" => SweepParam::Kappa,
            "beta" => SweepParam::Beta,
            "D_u" => SweepParam::DU,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::AEps => "a_eps",
            SweepParam::Lambda => "lambda",
            SweepParam::Epsilon => "epsilon",
            SweepParam::Kappa => "kappa",
            SweepParam::Beta => "beta",
            SweepParam::DU => "D_u",
        }
    }

    pub fn apply(self, scenario: &mut Scenario, value: f64) {
        match self {
            SweepParam::AEps => scenario.hair = HairSize::RadiusRatio(value),
            SweepParam::Lambda => scenario.hair = HairSize::Lambda(value),
            SweepParam::Epsilon => scenario.epsilon = value,
            SweepParam::Kappa => scenario.kappa = value,
            SweepParam::Beta => scenario.beta = value,
            SweepParam::DU => scenario.d_u = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    /// Steady linear `u₀` against the cosh/linear closed form.
    MacroU0,
    /// Resolved solver in annulus mode against the closed-form corrector.
    Annulus,
    /// Backward Euler against the exact semi-discrete flow.
    Time,
}

impl Study {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim() {
            "macro-u0" | "macro" => Study::MacroU0,
            "annulus" => Study::Annulus,
            "time" => Study::Time,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Study::MacroU0 => "macro-u0",
            Study::Annulus => "annulus",
            Study::Time => "time",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergeConfig {
    /// Defaults to the time study for transient scenarios and to the macro study otherwise.
    pub study: Option<Study>,
    /// When set, `run` appends a convergence table with this many levels.
    pub levels: Option<usize>,
    /// Cells on the coarsest level. The time study keeps this grid fixed and halves `dt`.
    pub base: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Label used in error messages, usually the file stem.
    pub name: String,
    pub scenario: Scenario,
    pub grids: GridConfig,
    pub outputs: OutputConfig,
    pub sweep: Option<SweepConfig>,
    pub converge: ConvergeConfig,
}

impl RunConfig {
    /// Defaults for a scenario built in code.
    pub fn from_scenario(name: impl Into<String>, scenario: Scenario) -> Self {
        let models = default_models(&scenario);
        Self {
            name: name.into(),
            scenario,
            grids: GridConfig::default(),
            outputs: OutputConfig {
                dir: None,
                slices: vec![0.0, 0.75],
                models,
                stride: 10,
            },
            sweep: None,
            converge: ConvergeConfig::default(),
        }
    }

    /// Checks everything that can be checked before solving and reports all violations.
    pub fn validate(&self) -> Result<()> {
        let mut errs = match self.scenario.validate() {
            Ok(()) => Vec::new(),
            Err(Error::Validation(v)) => v,
            Err(e) => vec![e.to_string()],
        };
        errs.extend(self.extra_violations());
        if let Some(sw) = &self.sweep {
            errs.extend(self.sweep_violations(sw));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    fn extra_violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let g = &self.grids;
        if g.n_macro < 4 {
            errs.push(format!("n_macro must be at least 4, got {}", g.n_macro));
        }
        if g.n_r < 16 || g.n_z < 16 {
            errs.push(format!(
                "n_r and n_z must be at least 16, got {} and {}",
                g.n_r, g.n_z
            ));
        }
        if g.psi_modes < 8 {
            errs.push(format!("psi_modes must be at least 8, got {}", g.psi_modes));
        }
        if !(g.ewald_split > 0.0 && g.ewald_split.is_finite()) {
            errs.push(format!(
                "ewald_split must be positive, got {}",
                g.ewald_split
            ));
        }
        if !(g.rho > 0.0 && g.rho < 0.5) {
            errs.push(format!("rho must lie in (0, 1/2), got {}", g.rho));
        }
        if !(g.picard.rel_tol > 0.0) || g.picard.max_iter == 0 {
            errs.push("picard_tol must be positive and picard_max_iter at least 1".into());
        }
        if !(g.picard.relaxation > 0.0 && g.picard.relaxation <= 1.0) {
            errs.push(format!(
                "picard_relaxation must lie in (0, 1], got {}",
                g.picard.relaxation
            ));
        }
        let o = &self.outputs;
        if o.models.is_empty() {
            errs.push("at least one model must be requested".into());
        }
        for &z in &o.slices {
            if !(z >= 0.0 && z <= self.scenario.m) {
                errs.push(format!("slice z={z} outside [0, {}]", self.scenario.m));
            }
        }
        if o.stride == 0 {
            errs.push("stride must be at least 1".into());
        }
        if !self.scenario.uptake.is_linear() && o.models.iter().any(|m| m.second_order()) {
            errs.push("second-order models A2/B2 need linear uptake".into());
        }
        if let Some(l) = self.converge.levels {
            if l < 3 {
                errs.push(format!("convergence levels must be at least 3, got {l}"));
            }
        }
        errs
    }

    fn sweep_violations(&self, sw: &SweepConfig) -> Vec<String> {
        let mut errs = Vec::new();
        if sw.values.is_empty() {
            errs.push("sweep needs at least one value".into());
        }
        for &v in &sw.values {
            let s = self.with_sweep_value(sw.param, v).scenario;
            if let Err(Error::Validation(list)) = s.validate() {
                for e in list {
                    errs.push(format!("{}={v}: {e}", sw.param.name()));
                }
            }
        }
        errs
    }

    /// Copy with one swept parameter replaced.
    pub fn with_sweep_value(&self, param: SweepParam, value: f64) -> RunConfig {
        let mut c = self.clone();
        param.apply(&mut c.scenario, value);
        c.sweep = None;
        c.name = format!("{} {}={value}", self.name, param.name());
        c
    }
}

/// All models, without the second-order ones when the uptake is nonlinear.
pub fn default_models(scenario: &Scenario) -> Vec<ModelKind> {
    ModelKind::ALL
        .into_iter()
        .filter(|m| scenario.uptake.is_linear() || !m.second_order())
        .collect()
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into());
    parse_config(&text, &name)
}

/// Raw entries grouped by section, with duplicate detection.
struct Entries {
    map: BTreeMap<(String, String), String>,
    used: std::cell::RefCell<std::collections::BTreeSet<(String, String)>>,
}

impl Entries {
    fn get(&self, section: &str, key: &str) -> Option<&str> {
        let k = (section.to_string(), key.to_string());
        let v = self.map.get(&k)?;
        self.used.borrow_mut().insert(k);
        Some(v.as_str())
    }

    fn unused(&self) -> Vec<String> {
        let used = self.used.borrow();
        self.map
            .keys()
            .filter(|k| !used.contains(*k))
            .map(|(s, k)| {
                if s.is_empty() {
                    k.clone()
                } else {
                    format!("[{s}] {k}")
                }
            })
            .collect()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Drops a comment introduced by `#` or `;` outside quotes.
fn strip_comment(line: &str) -> &str {
    let mut quote = None;
    for (i, c) in line.char_indices() {
        match (quote, c) {
            (None, '"' | '\'') => quote = Some(c),
            (Some(q), c) if c == q => quote = None,
            (None, '#' | ';') => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(v: &str, line: usize) -> Result<String> {
    let v = v.trim();
    for q in ['"', '\''] {
        if let Some(rest) = v.strip_prefix(q) {
            return match rest.strip_suffix(q) {
                Some(inner) if !inner.contains(q) => Ok(inner.to_string()),
                _ => Err(parse_err(line, "unterminated quote")),
            };
        }
    }
    Ok(v.to_string())
}

fn entries(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err(n, "section header is missing `]`"))?
                .trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(parse_err(n, format!("bad section name `{name}`")));
            }
            section = if name == "scenario" {
                String::new()
            } else {
                name.to_string()
            };
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| parse_err(n, format!("expected `key = value`, got `{line}`")))?;
        let k = k.trim();
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(parse_err(n, format!("bad key `{k}`")));
        }
        if map
            .insert((section.clone(), k.to_string()), unquote(v, n)?)
            .is_some()
        {
            return Err(parse_err(n, format!("duplicate key `{k}`")));
        }
    }
    Ok(Entries {
        map,
        used: Default::default(),
    })
}

/// Collects typed values and every problem found along the way.
struct Reader<'a> {
    e: &'a Entries,
    errs: Vec<String>,
}

impl Reader<'_> {
    fn float(&mut self, section: &str, key: &str) -> Option<f64> {
        let v = self.e.get(section, key)?;
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                self.errs
                    .push(format!("{key}: expected a number, got `{v}`"));
                None
            }
        }
    }

    fn count(&mut self, section: &str, key: &str) -> Option<usize> {
        let v = self.e.get(section, key)?;
        match v.parse::<usize>() {
            Ok(x) => Some(x),
            Err(_) => {
                self.errs
                    .push(format!("{key}: expected a non-negative integer, got `{v}`"));
                None
            }
        }
    }

    fn floats(&mut self, section: &str, key: &str) -> Option<Vec<f64>> {
        let v = self.e.get(section, key)?;
        match parse_float_list(v) {
            Ok(x) => Some(x),
            Err(msg) => {
                self.errs.push(format!("{key}: {msg}"));
                None
            }
        }
    }

    fn choice<T>(
        &mut self,
        section: &str,
        key: &str,
        parse: impl Fn(&str) -> Option<T>,
        expected: &str,
    ) -> Option<T> {
        let v = self.e.get(section, key)?;
        let r = parse(v);
        if r.is_none() {
            self.errs
                .push(format!("{key}: expected {expected}, got `{v}`"));
        }
        r
    }
}

/// Comma-separated finite numbers.
pub fn parse_float_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(format!("`{t}` is not a number")),
        })
        .collect()
}

fn parse_regime(s: &str) -> Option<Regime> {
    match s.trim() {
        "standard" | "A" | "a" => Some(Regime::Standard),
        "distinguished" | "B" | "b" => Some(Regime::Distinguished),
        "reference" | "full" | "full-reference" => Some(Regime::FullReference),
        other => Regime::parse(other),
    }
}

fn parse_uptake(s: &str) -> Option<UptakeLaw> {
    match s.trim() {
        "linear" => Some(UptakeLaw::Linear),
        "michaelis-menten" | "mm" | "MM" => Some(UptakeLaw::MichaelisMenten),
        _ => None,
    }
}

/// A number for a constant profile, or `z:value` pairs interpolated linearly in x₃.
fn parse_initial(s: &str) -> Option<InitialCondition> {
    if let Ok(v) = s.trim().parse::<f64>() {
        return Some(InitialCondition::Constant(v));
    }
    let mut pts = Vec::new();
    for item in s.split(',') {
        let (z, v) = item.split_once(':')?;
        pts.push((z.trim().parse().ok()?, v.trim().parse().ok()?));
    }
    if pts.is_empty() || pts.windows(2).any(|w: &[(f64, f64)]| w[1].0 <= w[0].0) {
        return None;
    }
    Some(InitialCondition::Axial(pts))
}

pub fn parse_config(text: &str, name: &str) -> Result<RunConfig> {
    let e = entries(text)?;
    let mut r = Reader {
        e: &e,
        errs: Vec::new(),
    };

    let regime = r.choice(
        "",
        "regime",
        parse_regime,
        "standard, distinguished or reference",
    );
    if e.map.get(&(String::new(), "regime".into())).is_none() {
        r.errs
            .push("regime is required (standard, distinguished or reference)".into());
    }
    let a = r.float("", "a_eps");
    let lam = r.float("", "lambda");
    let hair = match (a, lam) {
        (Some(_), Some(_)) => {
            r.errs.push("give either a_eps or lambda, not both".into());
            HairSize::RadiusRatio(0.01)
        }
        (Some(a), None) => HairSize::RadiusRatio(a),
        (None, Some(l)) => HairSize::Lambda(l),
        (None, None) => HairSize::RadiusRatio(0.01),
    };
    let mut s = Scenario::baseline(regime.unwrap_or(Regime::Distinguished), hair);
    if let Some(v) = r.float("", "epsilon") {
        s.epsilon = v;
    }
    if let Some(v) = r.float("", "L") {
        s.l = v;
    }
    if let Some(v) = r.float("", "M") {
        s.m = v;
    }
    if let Some(v) = r.float("", "beta") {
        s.beta = v;
    }
    if let Some(v) = r.float("", "D_u") {
        s.d_u = v;
    }
    if let Some(v) = r.float("", "kappa") {
        s.kappa = v;
    }
    if let Some(u) = r.choice("", "uptake", parse_uptake, "linear or michaelis-menten") {
        s.uptake = u;
    }
    let top_value = r.float("", "top_value").unwrap_or(1.0);
    let top = r
        .choice(
            "",
            "top_bc",
            |v| match v {
                "dirichlet" => Some(true),
                "zero-flux" | "zero_flux" | "neumann" => Some(false),
                _ => None,
            },
            "dirichlet or zero-flux",
        )
        .unwrap_or(true);
    s.top_bc = if top {
        TopBoundary::Dirichlet(top_value)
    } else {
        TopBoundary::ZeroFlux
    };
    if let Some(u) = r.choice("", "u_init", parse_initial, "a number or z:value pairs") {
        s.u_init = u;
    }
    let transient = r
        .choice(
            "",
            "mode",
            |v| match v {
                "steady" => Some(false),
                "transient" => Some(true),
                _ => None,
            },
            "steady or transient",
        )
        .unwrap_or(false);
    let t_end = r.float("", "t_end");
    let dt = r.float("", "dt");
    if transient {
        s.mode = Mode::Transient {
            t_end: t_end.unwrap_or(1.0),
            dt: dt.unwrap_or(0.01),
        };
    } else if t_end.is_some() || dt.is_some() {
        r.errs.push("t_end and dt need mode = transient".into());
    }

    let mut cfg = RunConfig::from_scenario(name, s);
    let g = &mut cfg.grids;
    if let Some(v) = r.count("grid", "n_macro") {
        g.n_macro = v;
    }
    if let Some(v) = r.count("grid", "n_r") {
        g.n_r = v;
    }
    if let Some(v) = r.count("grid", "n_z") {
        g.n_z = v;
    }
    if let Some(v) = r.choice("grid", "grading", RadialGrading::parse, "uniform or log") {
        g.grading = v;
    }
    if let Some(v) = r.count("grid", "psi_modes") {
        g.psi_modes = v;
    }
    if let Some(v) = r.float("grid", "ewald_split") {
        g.ewald_split = v;
    }
    if let Some(v) = r.float("grid", "rho") {
        g.rho = v;
    }
    if let Some(v) = r.float("grid", "picard_tol") {
        g.picard.rel_tol = v;
    }
    if let Some(v) = r.count("grid", "picard_max_iter") {
        g.picard.max_iter = v;
    }
    if let Some(v) = r.float("grid", "picard_relaxation") {
        g.picard.relaxation = v;
    }

    let o = &mut cfg.outputs;
    if let Some(d) = e.get("output", "dir") {
        o.dir = Some(PathBuf::from(d));
    }
    if let Some(v) = r.floats("output", "slices") {
        o.slices = v;
    }
    if let Some(list) = e.get("output", "models") {
        let mut models = Vec::new();
        for t in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match ModelKind::parse(t) {
                Some(m) if !models.contains(&m) => models.push(m),
                Some(_) => {}
                None => r.errs.push(format!("models: unknown model `{t}`")),
            }
        }
        models.sort();
        o.models = models;
    }
    if let Some(v) = r.count("output", "stride") {
        o.stride = v;
    }

    let param = r.choice(
        "sweep",
        "param",
        SweepParam::parse,
        "a_eps, lambda, epsilon, kappa, beta or D_u",
    );
    let values = r.floats("sweep", "values");
    cfg.sweep = match (param, values) {
        (Some(param), Some(values)) => Some(SweepConfig { param, values }),
        (None, None) => None,
        _ => {
            r.errs.push("[sweep] needs both param and values".into());
            None
        }
    };

    cfg.converge.study = r.choice(
        "converge",
        "study",
        Study::parse,
        "macro-u0, annulus or time",
    );
    cfg.converge.levels = r.count("converge", "levels");
    cfg.converge.base = r.count("converge", "base");

    for k in e.unused() {
        r.errs.push(format!("unknown key {k}"));
    }
    let mut errs = r.errs;
    if let Err(Error::Validation(v)) = cfg.validate() {
        for msg in v {
            if !errs.contains(&msg) {
                errs.push(msg);
            }
        }
    }
    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Validation(errs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn messages(r: Result<RunConfig>) -> Vec<String> {
        match r {
            Err(Error::Validation(v)) => v,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_config_names_regime() {
        let m = messages(parse_config("", "t"));
        assert!(m.iter().any(|s| s.contains("regime")), "{m:?}");
    }

    #[test]
    fn derived_lambda() {
        let c = parse_config("regime = distinguished\na_eps = 0.01\n", "t").unwrap();
        assert!((c.scenario.lambda() - 1.151293).abs() < 1e-6);
        assert_eq!(c.scenario.epsilon, 0.5);
        assert_eq!(c.outputs.models, ModelKind::ALL.to_vec());
    }

    #[test]
    fn hair_zone_taller_than_domain() {
        let m = messages(parse_config("regime=standard\nL=1.5\nM=1.0\n", "t"));
        assert!(m.iter().any(|s| s.contains("L < M")), "{m:?}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_config("regime = B\n[grid\nn_r = 3\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_config("regime = B\n# note\nkappa = 1\nkappa = 2\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        match parse_config("regime = B\nkappa\nbeta = 0\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let c = parse_config("regime = B ; inline\nkappa = 2 # doubled\n", "t").unwrap();
        assert_eq!(c.scenario.kappa, 2.0);
    }

    #[test]
    fn sections_and_lists() {
        let text = "regime = \"reference\"\nlambda = 1.2\nuptake = mm\nmode = transient\n\
                    top_bc = zero-flux\ndt = 0.01\nt_end = 1\n\n[grid]\nn_r = 32\ngrading = uniform\n\n\
                    [output]\nslices = 0, 0.25\nmodels = B, reference, A\n\n[sweep]\nparam = a_eps\n\
                    values = 1e-1, 1e-2\n";
        let c = parse_config(text, "t").unwrap();
        assert_eq!(c.scenario.regime, Regime::FullReference);
        assert!(matches!(c.scenario.top_bc, TopBoundary::ZeroFlux));
        assert_eq!(c.grids.n_r, 32);
        assert_eq!(c.outputs.slices, vec![0.0, 0.25]);
        assert_eq!(
            c.outputs.models,
            vec![ModelKind::Reference, ModelKind::A, ModelKind::B]
        );
        assert_eq!(c.sweep.unwrap().values, vec![0.1, 0.01]);
    }

    #[test]
    fn unknown_keys_and_bad_sweeps_are_reported_together() {
        let text = "regime = B\ncolour = red\n[sweep]\nparam = a_eps\nvalues = 0.1, 2.0\n";
        let m = messages(parse_config(text, "t"));
        assert!(m.iter().any(|s| s.contains("colour")));
        assert!(m.iter().any(|s| s.contains("a_eps=2")));
    }

    #[test]
    fn second_order_models_need_linear_uptake() {
        let m = messages(parse_config(
            "regime = B\nuptake = mm\n[output]\nmodels = B2\n",
            "t",
        ));
        assert!(m.iter().any(|s| s.contains("A2/B2")));
        let c = parse_config("regime = B\nuptake = mm\n", "t").unwrap();
        assert!(!c.outputs.models.contains(&ModelKind::B2));
    }
}
