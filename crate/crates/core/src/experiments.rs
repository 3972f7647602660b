//! Seeded random two-mode states, Monte Carlo checks of the correlation
//! inequalities, and the data behind the discord scatter plots.
//!
//! States are drawn in standard form: `a, b` uniform on `[1, a_max] × [1, b_max]`
//! and `c, d` uniform on `[−√ab, √ab]²`, rejecting unphysical draws and draws
//! outside the requested class. Chunk `k` of a sample uses ChaCha stream `k`
//! of the master seed, so results do not depend on the thread count.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discord::{emin_numeric, emin_standard_form, report_standard_form, EminCase, EminNumericOptions};
use crate::entanglement::{discord_bounds_given_geof, geof_two_mode_numeric, GeofOptions, PPT_TOL};
use crate::entropy::entropy_f_clamped as f;
use crate::error::{Error, Result};
use crate::families::{eavesdrop_scenario, separable_extremal_sf, squeezed_thermal_sf, two_mode_squeezed_sf};
use crate::two_mode::TwoModeStandardForm;

/// States per independent random stream.
pub const SAMPLER_CHUNK: usize = 256;
/// Consecutive rejections after which sampling gives up.
pub const STALL_LIMIT: u64 = 1_000_000;
/// Violations listed in full in a [`BoundReport`].
pub const MAX_LISTED_VIOLATIONS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    Any,
    Separable,
    Entangled,
    Product,
}

impl StateClass {
    fn accepts(self, sf: &TwoModeStandardForm) -> bool {
        match self {
            Self::Any | Self::Product => true,
            Self::Separable => sf.invariants().nu_tilde_minus >= 1.0,
            Self::Entangled => sf.invariants().nu_tilde_minus < 1.0 - PPT_TOL,
        }
    }
}

impl FromStr for StateClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(Self::Any),
            "separable" => Ok(Self::Separable),
            "entangled" => Ok(Self::Entangled),
            "product" => Ok(Self::Product),
            _ => Err(Error::Domain(format!("unknown state class {s:?} (any, separable, entangled, product)"))),
        }
    }
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Any => "any",
            Self::Separable => "separable",
            Self::Entangled => "entangled",
            Self::Product => "product",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub a_max: f64,
    pub b_max: f64,
    pub class: StateClass,
    pub count: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { seed: 0, a_max: 10.0, b_max: 10.0, class: StateClass::Any, count: 1000 }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a_max", self.a_max), ("b_max", self.b_max)] {
            if !(v > 1.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} = {v} must be finite and > 1")));
            }
        }
        Ok(())
    }
}

/// One random stream of states.
pub struct Sampler {
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
    pub draws: u64,
    pub rejections: u64,
}

impl Sampler {
    pub fn new(cfg: &SamplerConfig, stream: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Ok(Self { cfg: *cfg, rng, draws: 0, rejections: 0 })
    }

    pub fn next_state(&mut self) -> Result<TwoModeStandardForm> {
        let mut streak = 0;
        loop {
            self.draws += 1;
            let a = self.rng.random_range(1.0..=self.cfg.a_max);
            let b = self.rng.random_range(1.0..=self.cfg.b_max);
            let candidate = if self.cfg.class == StateClass::Product {
                TwoModeStandardForm::new(a, b, 0.0, 0.0)
            } else {
                let m = (a * b).sqrt();
                let c = self.rng.random_range(-m..=m);
                let d = self.rng.random_range(-m..=m);
                TwoModeStandardForm::normalized(a, b, c, d)
            };
            match candidate {
                Ok(sf) if self.cfg.class.accepts(&sf) => return Ok(sf),
                _ => {
                    self.rejections += 1;
                    streak += 1;
                    if streak >= STALL_LIMIT {
                        return Err(Error::SamplerStall(streak));
                    }
                }
            }
        }
    }
}

/// The first state of stream 0.
pub fn sample_state(cfg: &SamplerConfig) -> Result<TwoModeStandardForm> {
    Sampler::new(cfg, 0)?.next_state()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub config: SamplerConfig,
    pub states: Vec<TwoModeStandardForm>,
    pub draws: u64,
    pub rejections: u64,
}

impl Sample {
    pub fn rejection_rate(&self) -> f64 {
        if self.draws == 0 {
            0.0
        } else {
            self.rejections as f64 / self.draws as f64
        }
    }
}

pub fn sample_states(cfg: &SamplerConfig) -> Result<Sample> {
    cfg.validate()?;
    let n_chunks = cfg.count.div_ceil(SAMPLER_CHUNK);
    let chunks = par_map((0..n_chunks).collect(), |k| -> Result<(Vec<TwoModeStandardForm>, u64, u64)> {
        let mut sampler = Sampler::new(cfg, k as u64)?;
        let len = SAMPLER_CHUNK.min(cfg.count - k * SAMPLER_CHUNK);
        let states = (0..len).map(|_| sampler.next_state()).collect::<Result<Vec<_>>>()?;
        Ok((states, sampler.draws, sampler.rejections))
    });
    let mut out = Sample { config: *cfg, states: Vec::with_capacity(cfg.count), draws: 0, rejections: 0 };
    for chunk in chunks {
        let (states, draws, rejections) = chunk?;
        out.states.extend(states);
        out.draws += draws;
        out.rejections += rejections;
    }
    Ok(out)
}

/// Order-preserving map, parallel when the `parallel` feature is on.
fn par_map<T: Send, U: Send>(items: Vec<T>, op: impl Fn(T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(op).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(op).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `D^max − D^min ≤ D^min / (e^{D^min} − 1)`
    Asymmetry,
    /// `D← ≤ f(b) − f(a+b−1) + f((2a+b−1)/(1+b)) ≤ ((b−1)/2) ln((b+1)/(b−1)) ≤ 1`
    /// for separable states
    SeparableBound,
    /// `2 ln coth r ≤ D← ≤ max{E_G, 2 cosh² r ln coth r}` for entangled states
    EntangledBounds,
    /// closed-form `E_min` against the brute-force minimizer
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Asymmetry, Suite::SeparableBound, Suite::EntangledBounds, Suite::Oracle];

    pub fn slack(self) -> f64 {
        match self {
            Self::Asymmetry => 1e-9,
            Self::SeparableBound => 1e-6,
            Self::EntangledBounds => 1e-5,
            Self::Oracle => 1e-7,
        }
    }

    pub fn default_seed(self) -> u64 {
        match self {
            Self::Asymmetry => 101,
            Self::SeparableBound => 202,
            Self::EntangledBounds => 303,
            Self::Oracle => 404,
        }
    }

    fn class(self) -> StateClass {
        match self {
            Self::Asymmetry | Self::Oracle => StateClass::Any,
            Self::SeparableBound => StateClass::Separable,
            Self::EntangledBounds => StateClass::Entangled,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymmetry" => Ok(Self::Asymmetry),
            "separable" | "separable_bound" | "separable-bound" => Ok(Self::SeparableBound),
            "entangled" | "entangled_bounds" | "entangled-bounds" => Ok(Self::EntangledBounds),
            "oracle" => Ok(Self::Oracle),
            _ => Err(Error::Domain(format!("unknown suite {s:?} (asymmetry, separable, entangled, oracle)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    /// `None` is unbounded.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub count: usize,
}

const HISTOGRAM_EDGES: [f64; 9] = [-1e-3, -1e-6, -1e-9, 0.0, 1e-9, 1e-6, 1e-3, 1e-1, 1.0];

fn histogram(margins: &[f64]) -> Vec<HistogramBin> {
    let mut bins: Vec<HistogramBin> = (0..=HISTOGRAM_EDGES.len())
        .map(|i| HistogramBin {
            lower: i.checked_sub(1).map(|j| HISTOGRAM_EDGES[j]),
            upper: HISTOGRAM_EDGES.get(i).copied(),
            count: 0,
        })
        .collect();
    for &m in margins {
        let i = HISTOGRAM_EDGES.iter().take_while(|&&e| m >= e).count();
        bins[i].count += 1;
    }
    bins
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCounts {
    pub general: usize,
    pub homodyne: usize,
}

impl CaseCounts {
    fn add(&mut self, case: EminCase) {
        match case {
            EminCase::GeneralCase => self.general += 1,
            EminCase::HomodyneCase => self.homodyne += 1,
        }
    }

    /// Smaller of the two case fractions.
    pub fn min_fraction(&self) -> f64 {
        let total = self.general + self.homodyne;
        if total == 0 {
            0.0
        } else {
            self.general.min(self.homodyne) as f64 / total as f64
        }
    }
}

/// A state on the wrong side of a bound, with everything needed to
/// reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub source: String,
    pub state: TwoModeStandardForm,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
}

/// How close an injected extremal state comes to saturating a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationCheck {
    pub label: String,
    pub state: TwoModeStandardForm,
    pub value: f64,
    pub bound: f64,
    pub gap: f64,
    /// `None`: reported for information only.
    pub tolerance: Option<f64>,
    pub within: bool,
}

impl SaturationCheck {
    fn new(label: String, state: TwoModeStandardForm, value: f64, bound: f64, tolerance: Option<f64>) -> Self {
        let gap = bound - value;
        let within = tolerance.is_none_or(|t| gap.abs() <= t);
        Self { label, state, value, bound, gap, tolerance, within }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub suite: Suite,
    pub sampler: SamplerConfig,
    pub rejection_rate: f64,
    pub n_samples: usize,
    pub n_injected: usize,
    pub slack: f64,
    pub n_violations: usize,
    /// Smallest `bound − value` (for the oracle suite, minus the largest
    /// relative gap).
    pub worst_margin: f64,
    pub histogram: Vec<HistogramBin>,
    pub cases: CaseCounts,
    /// Least fraction of samples each closed-form case must cover.
    pub required_case_fraction: f64,
    pub violations: Vec<Violation>,
    pub saturation: Vec<SaturationCheck>,
    pub passed: bool,
}

/// Outcome of checking one state.
struct Check {
    value: f64,
    bound: f64,
    margin: f64,
    case: EminCase,
}

fn assemble(
    suite: Suite,
    sample: &Sample,
    checks: Vec<Result<Check>>,
    injected: Vec<(String, TwoModeStandardForm, Check)>,
    saturation: Vec<SaturationCheck>,
) -> Result<BoundReport> {
    let slack = suite.slack();
    let mut margins = Vec::with_capacity(checks.len() + injected.len());
    let mut violations = Vec::new();
    let mut n_violations = 0;
    let mut cases = CaseCounts::default();
    let labelled = checks
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.map(|c| (format!("sample {i}"), sample.states[i], c)))
        .collect::<Result<Vec<_>>>()?;
    let n_samples = labelled.len();
    for (k, (source, state, check)) in labelled.into_iter().chain(injected).enumerate() {
        if k < n_samples {
            cases.add(check.case);
        }
        margins.push(check.margin);
        if check.margin < -slack {
            n_violations += 1;
            if violations.len() < MAX_LISTED_VIOLATIONS {
                violations.push(Violation { source, state, value: check.value, bound: check.bound, margin: check.margin });
            }
        }
    }
    let required_case_fraction = if suite == Suite::Oracle { 0.05 } else { 0.0 };
    let passed = n_violations == 0
        && saturation.iter().all(|s| s.within)
        && cases.min_fraction() >= required_case_fraction;
    Ok(BoundReport {
        suite,
        sampler: sample.config,
        rejection_rate: sample.rejection_rate(),
        n_samples,
        n_injected: margins.len() - n_samples,
        slack,
        n_violations,
        worst_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
        histogram: histogram(&margins),
        cases,
        required_case_fraction,
        violations,
        saturation,
        passed,
    })
}

fn suite_sample(suite: Suite, n: usize, seed: u64) -> Result<Sample> {
    sample_states(&SamplerConfig { seed, class: suite.class(), count: n, ..SamplerConfig::default() })
}

/// Runs `suite` on `n` fresh samples plus its injected extremal states.
pub fn verify(suite: Suite, n: usize, seed: u64) -> Result<BoundReport> {
    match suite {
        Suite::Asymmetry => verify_asymmetry(n, seed),
        Suite::SeparableBound => verify_separable_bound(n, seed),
        Suite::EntangledBounds => verify_entangled_bounds(n, seed),
        Suite::Oracle => verify_oracle(n, seed),
    }
}

/// `x / (e^x − 1)`, equal to 1 at `x = 0`.
pub fn asymmetry_bound(d_min: f64) -> f64 {
    if d_min.abs() < 1e-300 {
        1.0
    } else {
        d_min / d_min.exp_m1()
    }
}

fn asymmetry_check(sf: &TwoModeStandardForm) -> Result<Check> {
    let rep = report_standard_form(sf)?;
    let (lo, hi) = (rep.d_left.min(rep.d_right), rep.d_left.max(rep.d_right));
    let bound = asymmetry_bound(lo);
    Ok(Check { value: hi - lo, bound, margin: bound - (hi - lo), case: rep.case_left })
}

pub fn verify_asymmetry(n: usize, seed: u64) -> Result<BoundReport> {
    let sample = suite_sample(Suite::Asymmetry, n, seed)?;
    let checks = par_map(sample.states.clone(), |sf| asymmetry_check(&sf));
    let mut injected = Vec::new();
    let mut saturation = Vec::new();
    for r in [0.1, 0.5, 1.0, 3.0] {
        let sf = squeezed_thermal_sf(r, 8.0)?;
        let c = asymmetry_check(&sf)?;
        saturation.push(SaturationCheck::new(format!("squeezed thermal r = {r}, s = 8"), sf, c.value, c.bound, Some(1e-2)));
        injected.push((format!("squeezed thermal r = {r}, s = 8"), sf, c));
    }
    let product = TwoModeStandardForm::new(3.0, 5.0, 0.0, 0.0)?;
    injected.push(("product a = 3, b = 5".into(), product, asymmetry_check(&product)?));
    assemble(Suite::Asymmetry, &sample, checks, injected, saturation)
}

/// `((b − 1)/2) ln((b + 1)/(b − 1))`, the largest discord of a separable
/// state with `det β = b²`.
pub fn separable_bound(b: f64) -> f64 {
    let y = 0.5 * (b - 1.0);
    if y <= 0.0 {
        0.0
    } else {
        y * (1.0 / y).ln_1p()
    }
}

/// `f(b) − f(a + b − 1) + f((2a + b − 1)/(1 + b))`, the discord of the
/// extremal separable state with local parameters `a, b`.
pub fn separable_bound_ab(a: f64, b: f64) -> f64 {
    f(b) - f(a + b - 1.0) + f((2.0 * a + b - 1.0) / (1.0 + b))
}

fn separable_check(sf: &TwoModeStandardForm) -> Result<Check> {
    let rep = report_standard_form(sf)?;
    let d = rep.d_left;
    // the tightest of the three bounds decides
    let bound = separable_bound_ab(sf.a, sf.b).min(separable_bound(sf.b)).min(1.0);
    Ok(Check { value: d, bound, margin: bound - d, case: rep.case_left })
}

pub fn verify_separable_bound(n: usize, seed: u64) -> Result<BoundReport> {
    let sample = suite_sample(Suite::SeparableBound, n, seed)?;
    let checks = par_map(sample.states.clone(), |sf| separable_check(&sf));
    let mut injected = Vec::new();
    let mut saturation = Vec::new();
    for b in [1.5, 2.0, 3.0, 5.0, 10.0] {
        let sf = separable_extremal_sf(1e3, b)?;
        let c = separable_check(&sf)?;
        let label = format!("separable extremal a = 1000, b = {b}");
        saturation.push(SaturationCheck::new(label.clone(), sf, c.value, separable_bound(b), Some(1e-2)));
        injected.push((label, sf, c));
    }
    for (a, b) in [(2.0, 3.0), (10.0, 1.5), (7.0, 9.0)] {
        let sf = separable_extremal_sf(a, b)?;
        let c = separable_check(&sf)?;
        let label = format!("separable extremal a = {a}, b = {b}");
        saturation.push(SaturationCheck::new(label.clone(), sf, c.value, separable_bound_ab(a, b), Some(1e-9)));
        injected.push((label, sf, c));
    }
    assemble(Suite::SeparableBound, &sample, checks, injected, saturation)
}

fn entangled_check(sf: &TwoModeStandardForm, opts: &GeofOptions) -> Result<Check> {
    let rep = report_standard_form(sf)?;
    let e_g = geof_two_mode_numeric(&sf.to_cm(), opts)?.value;
    let bounds = discord_bounds_given_geof(e_g)?;
    let d = rep.d_left;
    let (below, above) = (d - bounds.lower, bounds.upper - d);
    let (bound, margin) = if below < above { (bounds.lower, below) } else { (bounds.upper, above) };
    Ok(Check { value: d, bound, margin, case: rep.case_left })
}

pub fn verify_entangled_bounds(n: usize, seed: u64) -> Result<BoundReport> {
    let sample = suite_sample(Suite::EntangledBounds, n, seed)?;
    let opts = GeofOptions::default();
    let checks = par_map(sample.states.clone(), |sf| entangled_check(&sf, &opts));
    let mut injected = Vec::new();
    let mut saturation = Vec::new();
    // pure states have D← = E_G, the upper bound once E_G ≥ 2 ln 2
    for s in [0.2, 1.0, 2.0] {
        let sf = two_mode_squeezed_sf(s)?;
        let c = entangled_check(&sf, &opts)?;
        let label = format!("two-mode squeezed s = {s}");
        let e_g = geof_two_mode_numeric(&sf.to_cm(), &opts)?.value;
        saturation.push(SaturationCheck::new(label.clone(), sf, c.value, e_g, Some(1e-6)));
        injected.push((label, sf, c));
    }
    for r in [0.3, 1.0] {
        let sf = squeezed_thermal_sf(r, 3.0)?;
        let c = entangled_check(&sf, &opts)?;
        let label = format!("squeezed thermal r = {r}, s = 3");
        saturation.push(SaturationCheck::new(label.clone(), sf, c.value, c.bound, None));
        injected.push((label, sf, c));
    }
    assemble(Suite::EntangledBounds, &sample, checks, injected, saturation)
}

fn oracle_check(sf: &TwoModeStandardForm, opts: &EminNumericOptions) -> Result<Check> {
    let closed = emin_standard_form(sf)?;
    let numeric = emin_numeric(sf, opts).value;
    let gap = (closed.value - numeric).abs() / numeric.abs().max(1.0);
    Ok(Check { value: closed.value, bound: numeric, margin: -gap, case: closed.case })
}

pub fn verify_oracle(n: usize, seed: u64) -> Result<BoundReport> {
    let sample = suite_sample(Suite::Oracle, n, seed)?;
    let opts = EminNumericOptions::default();
    let checks = par_map(sample.states.clone(), |sf| oracle_check(&sf, &opts));
    let mut injected = Vec::new();
    let edge_cases = [
        ("two-mode squeezed s = 1".to_string(), two_mode_squeezed_sf(1.0)?),
        ("squeezed thermal r = 1, s = 2".to_string(), squeezed_thermal_sf(1.0, 2.0)?),
        ("separable extremal a = 5, b = 2".to_string(), separable_extremal_sf(5.0, 2.0)?),
        ("product a = 2, b = 7".to_string(), TwoModeStandardForm::new(2.0, 7.0, 0.0, 0.0)?),
        ("local vacuum on B".to_string(), TwoModeStandardForm::new(4.0, 1.0, 0.0, 0.0)?),
    ];
    for (label, sf) in edge_cases {
        injected.push((label, sf, oracle_check(&sf, &opts)?));
    }
    assemble(Suite::Oracle, &sample, checks, injected, Vec::new())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Panel {
    /// discord against marginal entropy, separable states
    Left,
    /// discord against Gaussian EoF, entangled states
    Right,
}

impl FromStr for Panel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            _ => Err(Error::Domain(format!("unknown panel {s:?} (left, right)"))),
        }
    }
}

pub const FIGURE_SLACK: f64 = 1e-5;
pub const LEFT_COLUMNS: [&str; 7] = ["a", "b", "c", "d", "marginal_entropy", "discord_left", "bound"];
pub const RIGHT_COLUMNS: [&str; 8] = ["a", "b", "c", "d", "geof", "discord_left", "lower_bound", "upper_bound"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureSummary {
    pub rows: usize,
    /// Rows on the wrong side of a bound by more than [`FIGURE_SLACK`].
    pub violations: usize,
}

/// Writes the scatter data of one panel as CSV with a header line. Left
/// rows: state, `f(b)`, `D←`, and the separable bound at `b`. Right rows:
/// state, `E_G`, `D←`, and the bounds at that `E_G`.
pub fn figure_data<W: Write>(panel: Panel, n: usize, seed: u64, out: W) -> Result<FigureSummary> {
    let class = match panel {
        Panel::Left => StateClass::Separable,
        Panel::Right => StateClass::Entangled,
    };
    let sample = sample_states(&SamplerConfig { seed, class, count: n, ..SamplerConfig::default() })?;
    let opts = GeofOptions::default();
    let rows = par_map(sample.states, |sf| -> Result<(Vec<f64>, bool)> {
        let d = report_standard_form(&sf)?.d_left;
        let head = [sf.a, sf.b, sf.c, sf.d];
        Ok(match panel {
            Panel::Left => {
                let bound = separable_bound(sf.b);
                let bad = d > bound.min(1.0) + FIGURE_SLACK;
                ([&head[..], &[f(sf.b), d, bound]].concat(), bad)
            }
            Panel::Right => {
                let e_g = geof_two_mode_numeric(&sf.to_cm(), &opts)?.value;
                let b = discord_bounds_given_geof(e_g)?;
                let bad = d < b.lower - FIGURE_SLACK || d > b.upper + FIGURE_SLACK;
                ([&head[..], &[e_g, d, b.lower, b.upper]].concat(), bad)
            }
        })
    });
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    match panel {
        Panel::Left => w.write_record(LEFT_COLUMNS)?,
        Panel::Right => w.write_record(RIGHT_COLUMNS)?,
    }
    let mut summary = FigureSummary { rows: 0, violations: 0 };
    for row in rows {
        let (values, bad) = row?;
        w.serialize(values)?;
        summary.rows += 1;
        summary.violations += usize::from(bad);
    }
    w.flush()?;
    Ok(summary)
}

/// Which local parameter the closed form `E_G(A|ST) = f(t + x(1 − t))` of
/// the eavesdropping scenario refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// Sally and Tom's squeezing
    S,
    /// Eve's squeezing
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BindingPoint {
    pub s: f64,
    pub n: f64,
    pub t: f64,
    pub geof: f64,
    pub f_s: f64,
    pub f_n: f64,
    /// Largest deviation of the `(A, S, T)` spectrum from `{1, 1, n}`.
    pub spectrum_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BindingReport {
    pub points: Vec<BindingPoint>,
    pub max_error_s: f64,
    pub max_error_n: f64,
    pub max_spectrum_error: f64,
    pub tolerance: f64,
    /// The binding matching on the whole grid, if exactly one does.
    pub binding: Option<Binding>,
}

/// Evaluates the eavesdropping scenario on the grid `ss × ns × ts` and
/// decides which reading of the closed-form EoF it follows.
pub fn eavesdrop_binding(ss: &[f64], ns: &[f64], ts: &[f64], tolerance: f64) -> Result<BindingReport> {
    let mut points = Vec::new();
    for &s in ss {
        for &n in ns {
            for &t in ts {
                let sc = eavesdrop_scenario(s, n, t)?;
                let mut spec = sc.spectrum_ast.clone();
                spec.sort_by(f64::total_cmp);
                let want = [1.0, 1.0, n];
                let spectrum_error = spec.iter().zip(want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                points.push(BindingPoint {
                    s,
                    n,
                    t,
                    geof: sc.geof_a_st.value,
                    f_s: f(t + s * (1.0 - t)),
                    f_n: f(t + n * (1.0 - t)),
                    spectrum_error,
                });
            }
        }
    }
    let max_err = |pick: fn(&BindingPoint) -> f64| points.iter().map(|p| (p.geof - pick(p)).abs()).fold(0.0, f64::max);
    let max_error_s = max_err(|p| p.f_s);
    let max_error_n = max_err(|p| p.f_n);
    let max_spectrum_error = points.iter().map(|p| p.spectrum_error).fold(0.0, f64::max);
    let binding = match (max_error_s <= tolerance, max_error_n <= tolerance) {
        (true, false) => Some(Binding::S),
        (false, true) => Some(Binding::N),
        _ => None,
    };
    Ok(BindingReport { points, max_error_s, max_error_n, max_spectrum_error, tolerance, binding })
}
