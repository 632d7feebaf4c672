//! Sparse potentials over the half-line or the whole line.
//!
//! A potential is a finite list of positive barriers on a zero baseline.
//! Because the growth condition forces barrier values like `e^114`
//! within a few stages, values may be stored either directly or in log
//! form; every consumer can ask for the value or its logarithm.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest barrier value kept in direct (non-log) storage.
pub const DIRECT_VALUE_MAX: f64 = 1e300;

/// Natural log of the largest `f64`-representable barrier value. Raw
/// values with larger logs saturate to `+inf` under [`BarrierValue::value`].
pub const MAX_REPRESENTABLE_LOG: f64 = 709.0;

/// Which lattice the operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Sites `1, 2, 3, ...`
    HalfLine,
    /// Sites over all integers; the negative side is `{0, -1, -2, ...}`.
    WholeLine,
}

/// A barrier value, stored exactly in whichever form it was given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierValue {
    /// The value itself; restricted to `(0, 1e300]`.
    Direct(f64),
    /// The natural log of the value; used once values exceed `1e300`
    /// (and by the constructors, which work in log space throughout).
    Log(f64),
}

impl BarrierValue {
    /// Natural log of the barrier value.
    pub fn log(&self) -> f64 {
        match *self {
            BarrierValue::Direct(v) => v.ln(),
            BarrierValue::Log(l) => l,
        }
    }

    /// The barrier value as `f64`; `+inf` if the stored log exceeds the
    /// representable range.
    pub fn value(&self) -> f64 {
        match *self {
            BarrierValue::Direct(v) => v,
            BarrierValue::Log(l) => l.exp(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BarrierValue::Direct(v) => {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "barrier value must be finite and positive, got {v}"
                    )));
                }
                if v > DIRECT_VALUE_MAX {
                    return Err(Error::InvalidArgument(format!(
                        "barrier value {v:e} exceeds {DIRECT_VALUE_MAX:e}; store it in log form"
                    )));
                }
                Ok(())
            }
            BarrierValue::Log(l) => {
                if !l.is_finite() {
                    return Err(Error::InvalidArgument(String::from(
                        "barrier log-value must be finite",
                    )));
                }
                Ok(())
            }
        }
    }
}

/// One barrier: a site and a strictly positive value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier {
    pub site: i64,
    pub value: BarrierValue,
}

/// A sparse potential: finitely many positive barriers, zero elsewhere.
///
/// Immutable after construction; barriers are kept sorted by site.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    domain: Domain,
    barriers: Vec<Barrier>,
}

impl PotentialSpec {
    /// Build a validated spec. Sites must be pairwise distinct, values
    /// strictly positive, and on the half-line all sites must be `>= 1`.
    pub fn new(domain: Domain, mut barriers: Vec<Barrier>) -> Result<Self> {
        for b in &barriers {
            b.value.validate()?;
            if domain == Domain::HalfLine && b.site < 1 {
                return Err(Error::InvalidArgument(format!(
                    "half-line barrier site must be >= 1, got {}",
                    b.site
                )));
            }
        }
        barriers.sort_by_key(|b| b.site);
        if barriers.windows(2).any(|w| w[0].site == w[1].site) {
            return Err(Error::InvalidArgument(String::from(
                "barrier sites must be pairwise distinct",
            )));
        }
        Ok(PotentialSpec { domain, barriers })
    }

    /// The zero potential.
    pub fn free(domain: Domain) -> Self {
        PotentialSpec { domain, barriers: Vec::new() }
    }

    /// Convenience constructor from `(site, value)` pairs.
    pub fn with_values(domain: Domain, pairs: &[(i64, f64)]) -> Result<Self> {
        let barriers = pairs
            .iter()
            .map(|&(site, v)| Barrier { site, value: BarrierValue::Direct(v) })
            .collect();
        Self::new(domain, barriers)
    }

    /// Convenience constructor from `(site, log-value)` pairs.
    pub fn with_log_values(domain: Domain, pairs: &[(i64, f64)]) -> Result<Self> {
        let barriers = pairs
            .iter()
            .map(|&(site, l)| Barrier { site, value: BarrierValue::Log(l) })
            .collect();
        Self::new(domain, barriers)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Barriers sorted by site.
    pub fn barriers(&self) -> &[Barrier] {
        &self.barriers
    }

    fn check_site(&self, n: i64) -> Result<()> {
        if self.domain == Domain::HalfLine && n < 1 {
            return Err(Error::Domain(format!("site {n} is outside the half-line domain")));
        }
        Ok(())
    }

    /// Potential value at site `n`: the barrier value on barrier sites,
    /// exactly `0` elsewhere.
    pub fn eval(&self, n: i64) -> Result<f64> {
        self.check_site(n)?;
        Ok(match self.barrier_at(n) {
            Some(b) => b.value.value(),
            None => 0.0,
        })
    }

    /// Log of the potential value at `n`, `None` off barrier sites.
    /// Downstream arithmetic on huge barriers consumes this form.
    pub fn log_eval(&self, n: i64) -> Result<Option<f64>> {
        self.check_site(n)?;
        Ok(self.barrier_at(n).map(|b| b.value.log()))
    }

    fn barrier_at(&self, n: i64) -> Option<&Barrier> {
        self.barriers
            .binary_search_by_key(&n, |b| b.site)
            .ok()
            .map(|i| &self.barriers[i])
    }

    /// Largest barrier site on the positive side (`>= 1`), if any.
    pub fn support_plus(&self) -> Option<i64> {
        self.barriers.iter().filter(|b| b.site >= 1).map(|b| b.site).max()
    }

    /// Most negative barrier site on the non-positive side (`<= 0`), if any.
    pub fn support_minus(&self) -> Option<i64> {
        self.barriers.iter().filter(|b| b.site <= 0).map(|b| b.site).min()
    }

    /// Restriction of a whole-line spec to the positive half-line
    /// `{1, 2, ...}`, as a half-line spec.
    pub fn restrict_plus(&self) -> Result<PotentialSpec> {
        let barriers = self.barriers.iter().filter(|b| b.site >= 1).cloned().collect();
        PotentialSpec::new(Domain::HalfLine, barriers)
    }

    /// Restriction of a whole-line spec to `{0, -1, -2, ...}`, reflected
    /// to a half-line spec via the site map `n -> 1 - n`.
    pub fn restrict_minus(&self) -> Result<PotentialSpec> {
        let barriers = self
            .barriers
            .iter()
            .filter(|b| b.site <= 0)
            .map(|b| Barrier { site: 1 - b.site, value: b.value })
            .collect();
        PotentialSpec::new(Domain::HalfLine, barriers)
    }

    /// Growth schedule of the positive-side barriers (sites ascending).
    /// For a whole-line spec the minus side is obtained from
    /// [`restrict_minus`](Self::restrict_minus) first.
    pub fn growth_schedule(&self) -> GrowthSchedule {
        let mut sites = Vec::new();
        let mut log_values = Vec::new();
        for b in self.barriers.iter().filter(|b| b.site >= 1) {
            sites.push(b.site);
            log_values.push(b.value.log());
        }
        GrowthSchedule { sites, log_values }
    }
}

/// Checks that consecutive barrier-site gaps are strictly increasing on
/// each side of the origin (the finite-spec stand-in for gaps tending
/// to infinity). Vacuously true with fewer than three barriers per side.
pub fn check_gaps(spec: &PotentialSpec) -> bool {
    let plus: Vec<i64> = spec.barriers().iter().map(|b| b.site).filter(|&s| s >= 1).collect();
    let minus: Vec<i64> =
        spec.barriers().iter().map(|b| 1 - b.site).filter(|&s| s >= 1).collect();
    gaps_increasing(&plus) && gaps_increasing(&minus)
}

fn gaps_increasing(sites: &[i64]) -> bool {
    let mut sorted: Vec<i64> = sites.into();
    sorted.sort_unstable();
    let gaps: Vec<i64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.windows(2).all(|w| w[1] > w[0])
}

/// The log-value schedule of one side's barriers, used by the growth
/// condition `ln V(L_n) - sum_{k<n} ln V(L_k) >= L_n + 1 + n^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSchedule {
    pub sites: Vec<i64>,
    pub log_values: Vec<f64>,
}

/// Per-index slack of the growth condition; the condition holds iff
/// every slack is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub slack: Vec<f64>,
}

impl GrowthReport {
    pub fn holds(&self) -> bool {
        self.slack.iter().all(|&s| s >= 0.0)
    }

    /// Index of the first failing stage (0-based), if any.
    pub fn first_failure(&self) -> Option<usize> {
        self.slack.iter().position(|&s| s < 0.0)
    }
}

impl GrowthSchedule {
    pub fn new(sites: Vec<i64>, log_values: Vec<f64>) -> Result<Self> {
        if sites.len() != log_values.len() {
            return Err(Error::InvalidArgument(String::from(
                "growth schedule sites and log_values must have equal length",
            )));
        }
        let s = GrowthSchedule { sites, log_values };
        s.validate_sites()?;
        Ok(s)
    }

    fn validate_sites(&self) -> Result<()> {
        if self.sites.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(String::from(
                "growth schedule sites must be strictly increasing",
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Per-index slack of the growth condition:
    /// `slack_n = ln V(L_n) - sum_{k<n} ln V(L_k) - (L_n + 1 + n^2)`
    /// with `n` counted from 1. Empty schedules hold vacuously.
    pub fn check_growth(&self) -> Result<GrowthReport> {
        self.validate_sites()?;
        let mut slack = Vec::with_capacity(self.len());
        let mut log_sum = 0.0;
        for (i, (&site, &lv)) in self.sites.iter().zip(&self.log_values).enumerate() {
            let n = (i + 1) as f64;
            slack.push(lv - log_sum - (site as f64 + 1.0 + n * n));
            log_sum += lv;
        }
        Ok(GrowthReport { slack })
    }
}
