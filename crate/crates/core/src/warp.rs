//! Conformal transfer between a warped product `I x_omega Q^n` and the
//! product `Q^n x J`.
//!
//! With `F' = 1 / omega`, the map `(t, p) -> (p, F(t))` scales the metric by
//! `1 / omega^2`, so totally umbilical hypersurfaces correspond. Heights on
//! the product side are stored relative to an explicit `offset`, which
//! centres `J` when it is bounded.

use crate::assemble::{AssembledHypersurface, AssembledPoint, HeightMap, Topology};
use crate::error::{out_of_domain, Error, Result};
use crate::export::{csv_row, round_sig};
use crate::families::FamilySpec;
use crate::interp::{parse_two_column_csv, MonotoneCubic};
use crate::profile::Profile;
use crate::quadrature::integrate_smooth;
use crate::roots::invert_monotone;
use crate::spaceform::{tangent_frame, ConformalChart, SpaceFormId};
use crate::verify::{
    graph_displace, umbilicity_report_chart_local, ChartSurface, SampleSpec, UmbilicReport,
    WarpedChartMetric, SEAM_MARGIN,
};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::sync::Arc;

/// Default offset for `omega = e^{-t}`, whose `F(I) = (0, inf)` has no
/// centre.
pub const EXP_NEG_OFFSET: f64 = 10.0;
/// Half-widths of `J` beyond this are treated as infinite.
pub const DIVERGENCE_CUTOFF: f64 = 1e6;

#[derive(Clone, Debug)]
pub enum Omega {
    /// `omega(t) = t` on `(0, inf)`.
    Identity,
    /// `omega(t) = e^{-t}` on `R`.
    ExpNeg,
    /// `omega = k` on `(-half_width, half_width)`.
    Constant { k: f64, half_width: f64 },
    /// `omega(t) = cosh t` on `R`.
    Cosh,
    /// Monotone cubic through positive samples, on the open table range.
    Table(Arc<WarpTable>),
}

#[derive(Clone, Debug)]
pub struct WarpTable {
    omega: MonotoneCubic,
    /// `F` at the knots, starting from 0.
    cumulative: Vec<f64>,
}

impl WarpTable {
    pub fn new(t: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if omega.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidParameter("warping function must be positive".into()));
        }
        let omega = MonotoneCubic::new(t, omega)?;
        let knots = omega.knots().to_vec();
        let mut cumulative = vec![0.0];
        for w in knots.windows(2) {
            let piece = integrate_smooth(|x| 1.0 / omega.eval(x).unwrap_or(f64::NAN), w[0], w[1])?;
            cumulative.push(cumulative.last().unwrap() + piece.value);
        }
        Ok(WarpTable { omega, cumulative })
    }

    /// Parses a CSV with header `t,omega`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let (t, w) = parse_two_column_csv(text, ("t", "omega"))?;
        Self::new(t, w)
    }

    fn primitive(&self, t: f64) -> Result<f64> {
        let knots = self.omega.knots();
        let i = match knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => return Ok(self.cumulative[i]),
            Err(i) => i.saturating_sub(1).min(knots.len() - 2),
        };
        let r = integrate_smooth(|x| 1.0 / self.omega.eval(x).unwrap_or(f64::NAN), knots[i], t)?;
        Ok(self.cumulative[i] + r.value)
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }
}

#[derive(Clone, Debug)]
pub struct WarpSpec {
    omega: Omega,
    interval: (f64, f64),
    offset: f64,
}

impl WarpSpec {
    pub fn identity() -> Self {
        WarpSpec {
            omega: Omega::Identity,
            interval: (0.0, f64::INFINITY),
            offset: 0.0,
        }
    }

    pub fn exp_neg(offset: f64) -> Result<Self> {
        if !(offset.is_finite()) {
            return Err(Error::InvalidParameter("offset must be finite".into()));
        }
        Ok(WarpSpec {
            omega: Omega::ExpNeg,
            interval: (f64::NEG_INFINITY, f64::INFINITY),
            offset,
        })
    }

    /// `omega = k` on `(-half_width, half_width)`; the half width may be
    /// infinite.
    pub fn constant(k: f64, half_width: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("constant warping needs k > 0, got {k}")));
        }
        if !(half_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interval half width must be positive, got {half_width}"
            )));
        }
        Ok(WarpSpec {
            omega: Omega::Constant { k, half_width },
            interval: (-half_width, half_width),
            offset: 0.0,
        })
    }

    /// Constant warping whose recentred slab is `(-delta, delta)`.
    pub fn constant_with_delta(k: f64, delta: f64) -> Result<Self> {
        Self::constant(k, k * delta)
    }

    pub fn cosh() -> Self {
        WarpSpec {
            omega: Omega::Cosh,
            interval: (f64::NEG_INFINITY, f64::INFINITY),
            offset: 0.0,
        }
    }

    pub fn table(table: WarpTable) -> Self {
        let interval = table.omega.range();
        let offset = 0.5 * table.total();
        WarpSpec {
            omega: Omega::Table(Arc::new(table)),
            interval,
            offset,
        }
    }

    pub fn omega_kind(&self) -> &Omega {
        &self.omega
    }

    pub fn name(&self) -> String {
        match &self.omega {
            Omega::Identity => "t".into(),
            Omega::ExpNeg => "exp(-t)".into(),
            Omega::Constant { k, .. } => format!("const:{k}"),
            Omega::Cosh => "cosh".into(),
            Omega::Table(_) => "table".into(),
        }
    }

    /// The open interval `I`.
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn check_t(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.interval;
        if t > lo && t < hi {
            Ok(())
        } else {
            Err(out_of_domain("t", t, self.interval))
        }
    }

    pub fn omega(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(self.omega_unchecked(t))
    }

    fn omega_unchecked(&self, t: f64) -> f64 {
        match &self.omega {
            Omega::Identity => t,
            Omega::ExpNeg => (-t).exp(),
            Omega::Constant { k, .. } => *k,
            Omega::Cosh => t.cosh(),
            Omega::Table(tab) => tab.omega.eval(t).unwrap_or(f64::NAN),
        }
    }

    pub fn omega_prime(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(match &self.omega {
            Omega::Identity => 1.0,
            Omega::ExpNeg => -(-t).exp(),
            Omega::Constant { .. } => 0.0,
            Omega::Cosh => t.sinh(),
            Omega::Table(tab) => tab.omega.derivative(t)?,
        })
    }

    /// Raw `F`, before subtracting the offset.
    pub fn f_of(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        Ok(match &self.omega {
            Omega::Identity => t.ln(),
            Omega::ExpNeg => t.exp(),
            Omega::Constant { k, .. } => t / k,
            Omega::Cosh => t.sinh().atan(),
            Omega::Table(tab) => tab.primitive(t)?,
        })
    }

    /// Raw `F(I)`.
    pub fn f_range(&self) -> (f64, f64) {
        match &self.omega {
            Omega::Identity => (f64::NEG_INFINITY, f64::INFINITY),
            Omega::ExpNeg => (0.0, f64::INFINITY),
            Omega::Constant { k, half_width } => (-half_width / k, half_width / k),
            Omega::Cosh => (-FRAC_PI_2, FRAC_PI_2),
            Omega::Table(tab) => (0.0, tab.total()),
        }
    }

    pub fn f_inverse(&self, u: f64) -> Result<f64> {
        let (lo, hi) = self.f_range();
        if !(u > lo && u < hi) {
            return Err(out_of_domain("F value", u, (lo, hi)));
        }
        Ok(match &self.omega {
            Omega::Identity => u.exp(),
            Omega::ExpNeg => u.ln(),
            Omega::Constant { k, .. } => u * k,
            Omega::Cosh => u.tan().asinh(),
            Omega::Table(tab) => {
                let (a, b) = self.interval;
                invert_monotone(
                    |t| tab.primitive(t).unwrap_or(f64::NAN),
                    |t| 1.0 / self.omega_unchecked(t),
                    u,
                    a,
                    b,
                    1e-13,
                )?
            }
        })
    }

    /// `J = F(I) - offset`.
    pub fn j_interval(&self) -> (f64, f64) {
        let (lo, hi) = self.f_range();
        (lo - self.offset, hi - self.offset)
    }

    /// Half-width of `J`; infinite when `J` is unbounded on either side or
    /// wider than the divergence cutoff.
    pub fn delta(&self) -> f64 {
        let (lo, hi) = self.j_interval();
        let d = 0.5 * (hi - lo);
        if d.is_finite() && d <= DIVERGENCE_CUTOFF {
            d
        } else {
            f64::INFINITY
        }
    }

    /// Warped metric in the chart `(t, y)` with `y` conformal coordinates of
    /// `Q^n`.
    pub fn chart_metric(&self, space: SpaceFormId) -> WarpedChartMetric {
        let spec = self.clone();
        WarpedChartMetric::new(space, Arc::new(move |t| spec.omega(t).unwrap_or(f64::NAN)))
    }
}

/// A point of the pulled-back hypersurface: warped height `t` over the base
/// point, with its product height `v` relative to the offset.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedPoint {
    pub piece: usize,
    pub s: f64,
    pub chart: Vec<f64>,
    pub base: Vec<f64>,
    pub t: f64,
    pub v: f64,
    pub seam: bool,
}

#[derive(Clone, Debug)]
pub struct WarpedSet {
    pub points: Vec<WarpedPoint>,
    /// Subtracted from product heights before the transfer.
    pub shift: f64,
    /// Number of samples outside `J`.
    pub clipped: usize,
}

/// Height shift placing the hypersurface symmetrically about 0 where it has
/// a reflection plane: `t0` for closed spheres, 0 otherwise.
pub fn product_shift(h: &AssembledHypersurface) -> f64 {
    match h.topology() {
        Topology::SphereLike => h.top_height().expect("closed assemblies carry t0"),
        _ => 0.0,
    }
}

/// Applies `(p, v) -> (F^{-1}(v + offset), p)` to the samples lying in `J`.
pub fn pull_back(spec: &WarpSpec, h: &AssembledHypersurface, samples: &[AssembledPoint]) -> Result<WarpedSet> {
    let shift = product_shift(h);
    let (lo, hi) = spec.j_interval();
    let inside: Vec<&AssembledPoint> = samples
        .iter()
        .filter(|p| {
            let v = p.t - shift;
            v > lo && v < hi
        })
        .collect();
    if inside.is_empty() {
        return Err(Error::EmptySlab { lo, hi });
    }
    let points = inside
        .par_iter()
        .map(|p| {
            let v = p.t - shift;
            Ok(WarpedPoint {
                piece: p.piece,
                s: p.s,
                chart: p.chart.clone(),
                base: p.base.clone(),
                t: spec.f_inverse(v + spec.offset)?,
                v,
                seam: p.seam,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WarpedSet {
        clipped: samples.len() - points.len(),
        points,
        shift,
    })
}

/// Inverse of [`pull_back`] on the retained samples.
pub fn map_to_product(spec: &WarpSpec, set: &WarpedSet) -> Result<Vec<AssembledPoint>> {
    set.points
        .par_iter()
        .map(|p| {
            Ok(AssembledPoint {
                piece: p.piece,
                s: p.s,
                chart: p.chart.clone(),
                base: p.base.clone(),
                t: spec.f_of(p.t)? - spec.offset + set.shift,
                seam: p.seam,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WarpClassification {
    pub topology: Topology,
    pub complete: bool,
    /// The height range touches an end of `J` exactly, where the sphere /
    /// annulus dichotomy is undecided.
    pub borderline: bool,
    pub delta: f64,
}

/// Topology and completeness of the pulled-back hypersurface.
///
/// A closed sphere stays a sphere when its heights fit strictly inside `J`
/// and becomes an annulus otherwise. The pulled-back hypersurface is
/// complete unless the closure of its heights reaches an end of `J` whose
/// preimage is a finite end of `I`.
pub fn classify_warped(spec: &WarpSpec, h: &AssembledHypersurface) -> WarpClassification {
    let shift = product_shift(h);
    let (lo, hi) = h.height_range();
    let (lo, hi) = (lo - shift, hi - shift);
    let (jl, jh) = spec.j_interval();
    let (il, ih) = spec.interval();
    let tol = |a: f64, b: f64| {
        a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    };
    let reach_lo = lo <= jl || tol(lo, jl);
    let reach_hi = hi >= jh || tol(hi, jh);
    let complete = !(reach_lo && il.is_finite()) && !(reach_hi && ih.is_finite());
    let borderline = tol(lo, jl) || tol(hi, jh);
    let topology = match h.topology() {
        Topology::SphereLike if reach_lo || reach_hi => Topology::AnnulusLike,
        Topology::SphereLike => Topology::SphereLike,
        _ => Topology::BallLike,
    };
    WarpClassification {
        topology,
        complete,
        borderline,
        delta: spec.delta(),
    }
}

/// The fundamental graph (or one of its reflected copies) pulled back to the
/// warped product, in the chart `(t, y)` of [`WarpSpec::chart_metric`] and
/// parametrized by `(s, chart)`.
#[derive(Clone, Debug)]
pub struct WarpedGraphSurface {
    profile: Profile,
    spec: WarpSpec,
    map: HeightMap,
    shift: f64,
    chart: ConformalChart,
}

impl WarpedGraphSurface {
    pub fn new(spec: &WarpSpec, h: &AssembledHypersurface, piece: usize) -> Result<Self> {
        let map = h
            .pieces()
            .get(piece)
            .ok_or_else(|| Error::InvalidParameter(format!("no piece {piece}")))?
            .map;
        Ok(WarpedGraphSurface {
            profile: h.profile().clone(),
            spec: spec.clone(),
            map,
            shift: product_shift(h),
            chart: h.profile().family().conformal_chart()?,
        })
    }

    /// Warped height of the graph point over `s`.
    pub fn height(&self, s: f64) -> Result<f64> {
        let v = self.map.apply(self.profile.phi(s)?) - self.shift;
        self.spec.f_inverse(v + self.spec.offset)
    }

    /// Umbilical function of the pulled-back hypersurface. The warped metric
    /// is `omega^2` times the product metric, which turns the product value
    /// `k` into `(k - N(log omega)) / omega` with `N(log omega) =
    /// sigma theta omega'`.
    pub fn umbilical_value(&self, s: f64) -> Result<f64> {
        let k = -self.profile.rho(s)? * self.profile.lambda(s)?;
        let t = self.height(s)?;
        let dn = self.map.sigma * self.profile.theta(s)? * self.spec.omega_prime(t)?;
        Ok((k - dn) / self.spec.omega(t)?)
    }

    /// Sample at `(s, chart)` with the analytic umbilical value attached, or
    /// `None` when the point lies outside the slab.
    pub fn sample(&self, s: f64, chart: &[f64]) -> Result<Option<SampleSpec>> {
        if self.height(s).is_err() {
            return Ok(None);
        }
        let mut params = vec![s];
        params.extend_from_slice(chart);
        Ok(Some(SampleSpec {
            params,
            s: Some(s),
            analytic: Some(self.umbilical_value(s)?),
            near_seam: self.profile.rho(s)? > 1.0 - SEAM_MARGIN,
        }))
    }

    /// The same surface in a conformal chart centred at the base point of
    /// the parameters `u`, where the chart is best conditioned.
    pub fn centred_at(&self, u: &[f64]) -> Result<Self> {
        let centre = self.family().eval_family(u[0], &u[1..])?.point;
        let mut frame = vec![centre.coords().to_vec()];
        frame.extend(tangent_frame(&centre, &[], self.family().space().dim())?);
        Ok(WarpedGraphSurface {
            chart: ConformalChart::new(self.family().space(), frame)?,
            ..self.clone()
        })
    }

    /// Umbilicity report with the chart recentred at every sample.
    pub fn report(&self, grid: &[SampleSpec], h: f64, tol: f64) -> Result<UmbilicReport> {
        umbilicity_report_chart_local(&self.metric(), |u| self.centred_at(u), grid, h, tol)
    }

    pub fn metric(&self) -> WarpedChartMetric {
        self.spec.chart_metric(self.family().space())
    }

    fn family(&self) -> &FamilySpec {
        self.profile.family()
    }
}

impl ChartSurface for WarpedGraphSurface {
    fn param_dim(&self) -> usize {
        self.family().space().dim()
    }

    fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        let base = self.family().eval_family(u[0], &u[1..])?.point;
        let mut x = vec![self.height(u[0])?];
        x.extend(self.chart.to_chart(base.coords()));
        Ok(x)
    }

    /// `(sigma theta omega, dY(-rho eta))`: the product normal carried to the
    /// chart, up to a positive factor.
    fn reference_normal(&self, u: &[f64]) -> Option<Vec<f64>> {
        let (s, chart) = (u[0], &u[1..]);
        let ev = self.family().eval_family(s, chart).ok()?;
        let rho = self.profile.rho(s).ok()?;
        let theta = self.profile.theta(s).ok()?;
        let x = self.point(u).ok()?;
        let w = self.spec.omega(x[0]).ok()?;
        let p = ev.point.coords();
        let d = ev.normal.coords();
        let step = 1e-6;
        let shifted = |k: f64| -> Vec<f64> {
            let q: Vec<f64> = p.iter().zip(d).map(|(a, b)| a - k * rho * b).collect();
            self.chart.to_chart(&q)
        };
        let (yp, ym) = (shifted(step), shifted(-step));
        let mut n = vec![self.map.sigma * theta * w];
        n.extend(yp.iter().zip(&ym).map(|(a, b)| (a - b) / (2.0 * step)));
        Some(n)
    }

    fn displace(&self, u: &[f64], a: usize, delta: f64) -> Result<Vec<f64>> {
        graph_displace(&self.profile, u, a, delta)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WarpMetadata {
    pub omega: String,
    pub delta: f64,
    pub offset: f64,
    pub topology: &'static str,
    pub complete: bool,
    pub borderline: bool,
    pub points: usize,
    pub clipped: usize,
}

impl WarpMetadata {
    pub fn new(spec: &WarpSpec, class: &WarpClassification, set: &WarpedSet) -> Self {
        WarpMetadata {
            omega: spec.name(),
            delta: round_sig(class.delta),
            offset: round_sig(spec.offset),
            topology: class.topology.name(),
            complete: class.complete,
            borderline: class.borderline,
            points: set.points.len(),
            clipped: set.clipped,
        }
    }

    /// JSON with an infinite `delta` written as the string `"inf"`.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("metadata serializes");
        if !self.delta.is_finite() {
            v["delta"] = serde_json::Value::String(crate::export::fmt_num(self.delta));
        }
        serde_json::to_string_pretty(&v).expect("metadata serializes")
    }
}

/// CSV with columns `t, x_0.., piece, s`.
pub fn write_warped_csv<W: Write>(set: &WarpedSet, mut out: W) -> Result<()> {
    let Some(first) = set.points.first() else {
        return Ok(());
    };
    let mut header = vec!["t".to_string()];
    header.extend((0..first.base.len()).map(|i| format!("x_{i}")));
    header.extend(["piece", "s"].map(String::from));
    writeln!(out, "{}", header.join(","))?;
    for p in &set.points {
        let mut row = vec![p.t];
        row.extend_from_slice(&p.base);
        writeln!(out, "{},{},{}", csv_row(&row), p.piece, crate::export::fmt_num(p.s))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{assemble, chart_grid, AssembleOptions};
    use crate::profile::ProfileOptions;
    use crate::verify::{shape_operator_chart, VerticalLeaf};
    use approx::assert_abs_diff_eq;

    fn assembled(family: FamilySpec, c: f64) -> AssembledHypersurface {
        let p = Profile::new(family, c, ProfileOptions::default()).unwrap();
        assemble(&p, AssembleOptions::default()).unwrap()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(WarpSpec::identity().f_of(1.0).unwrap(), 0.0);
        assert_eq!(WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap().f_of(0.0).unwrap(), 1.0);
        assert_eq!(WarpSpec::constant(2.0, f64::INFINITY).unwrap().f_of(3.0).unwrap(), 1.5);
        assert_eq!(WarpSpec::identity().f_inverse(0.0).unwrap(), 1.0);
        assert_eq!(WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap().f_inverse(1.0).unwrap(), 0.0);
        assert!(WarpSpec::identity().f_of(-1.0).is_err());
        assert!(WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap().f_inverse(-0.5).is_err());
    }

    #[test]
    fn delta_values() {
        assert_eq!(WarpSpec::identity().delta(), f64::INFINITY);
        assert_eq!(WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap().delta(), f64::INFINITY);
        assert_abs_diff_eq!(WarpSpec::constant(2.0, 3.0).unwrap().delta(), 1.5);
        assert_abs_diff_eq!(WarpSpec::cosh().delta(), FRAC_PI_2);
    }

    #[test]
    fn table_primitive_round_trip() {
        let t: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        let w: Vec<f64> = t.iter().map(|x: &f64| x.cosh()).collect();
        let spec = WarpSpec::table(WarpTable::new(t, w).unwrap());
        // close to the Gudermannian on a fine table
        let gd = |x: f64| x.sinh().atan();
        let f = spec.f_of(0.5).unwrap();
        assert_abs_diff_eq!(f, gd(0.5) - gd(-1.0), epsilon = 1e-4);
        assert_abs_diff_eq!(spec.delta(), gd(1.0), epsilon = 1e-4);
        let (lo, hi) = spec.f_range();
        for k in 1..20 {
            let u = lo + (hi - lo) * k as f64 / 20.0;
            let t = spec.f_inverse(u).unwrap();
            assert!((spec.f_of(t).unwrap() - u).abs() <= 1e-12);
        }
    }

    #[test]
    fn table_rejects_nonpositive() {
        assert!(WarpTable::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn round_trip_through_product() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = assembled(FamilySpec::sphere(s2).unwrap(), 2.0);
        let charts = chart_grid(h.profile(), 6).unwrap();
        let pts = h.sample(20, &charts).unwrap();
        for spec in [WarpSpec::identity(), WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap(), WarpSpec::cosh()] {
            let set = pull_back(&spec, &h, &pts).unwrap();
            assert_eq!(set.clipped, 0);
            let back = map_to_product(&spec, &set).unwrap();
            for (a, b) in pts.iter().zip(&back) {
                assert!((a.t - b.t).abs() <= 1e-10);
                assert_eq!(a.base, b.base);
            }
        }
    }

    #[test]
    fn constant_unit_is_recentred_identity() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = assembled(FamilySpec::sphere(s2).unwrap(), 2.0);
        let charts = chart_grid(h.profile(), 4).unwrap();
        let pts = h.sample(10, &charts).unwrap();
        let set = pull_back(&WarpSpec::constant(1.0, f64::INFINITY).unwrap(), &h, &pts).unwrap();
        let t0 = h.top_height().unwrap();
        for (a, b) in pts.iter().zip(&set.points) {
            assert_eq!(b.t, a.t - t0);
        }
    }

    #[test]
    fn clipping_and_empty_slab() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = assembled(FamilySpec::sphere(s2).unwrap(), 2.0);
        let charts = chart_grid(h.profile(), 4).unwrap();
        let pts = h.sample(30, &charts).unwrap();
        let set = pull_back(&WarpSpec::constant_with_delta(1.0, 0.4).unwrap(), &h, &pts).unwrap();
        assert!(set.clipped > 0 && !set.points.is_empty());
        // an exp-warped slab far above the surface
        let spec = WarpSpec::exp_neg(-5.0).unwrap();
        assert!(matches!(pull_back(&spec, &h, &pts), Err(Error::EmptySlab { .. })));
    }

    #[test]
    fn classification_examples() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h2 = SpaceFormId::hyperbolic(2).unwrap();
        let sphere = assembled(FamilySpec::sphere(s2).unwrap(), 2.0);
        for spec in [WarpSpec::identity(), WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap()] {
            let c = classify_warped(&spec, &sphere);
            assert_eq!((c.topology, c.complete), (Topology::SphereLike, true));
            assert_eq!(c.delta, f64::INFINITY);
        }
        let spec = WarpSpec::constant_with_delta(1.0, 0.4).unwrap();
        let c = classify_warped(&spec, &sphere);
        assert_eq!(c.topology, Topology::AnnulusLike);
        assert_abs_diff_eq!(c.delta, 0.4, epsilon = 1e-15);
        // diameter exactly 2 delta
        let d = sphere.vertical_diameter().unwrap();
        let c = classify_warped(&WarpSpec::constant_with_delta(1.0, d / 2.0).unwrap(), &sphere);
        assert_eq!(c.topology, Topology::AnnulusLike);
        assert!(c.borderline);

        let horo = assembled(FamilySpec::horosphere(h2).unwrap(), 1.0);
        let c = classify_warped(&WarpSpec::constant_with_delta(1.0, 2.0).unwrap(), &horo);
        assert_eq!((c.topology, c.complete), (Topology::BallLike, true));
        let c = classify_warped(&WarpSpec::constant_with_delta(1.0, 1.0).unwrap(), &horo);
        assert!(!c.complete);

        let equi = assembled(FamilySpec::equidistant(h2).unwrap(), 0.5);
        let c = classify_warped(&WarpSpec::identity(), &equi);
        assert_eq!((c.topology, c.complete), (Topology::BallLike, false));
        let c = classify_warped(&WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap(), &equi);
        assert!(c.complete);
    }

    #[test]
    fn vertical_leaf_constant() {
        let s3 = SpaceFormId::sphere(3).unwrap();
        for (spec, t) in [
            (WarpSpec::identity(), 1.5),
            (WarpSpec::cosh(), 0.7),
            (WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap(), 0.3),
        ] {
            let metric = spec.chart_metric(s3);
            let leaf = VerticalLeaf { dim: 3, t };
            let op = shape_operator_chart(&metric, &leaf, &[0.1, -0.2, 0.3], 1e-3).unwrap();
            let expected = spec.omega_prime(t).unwrap() / spec.omega(t).unwrap();
            for k in op.eigenvalues {
                assert_abs_diff_eq!(k, expected, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn metadata_writes_infinite_delta() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = assembled(FamilySpec::sphere(s2).unwrap(), 2.0);
        let spec = WarpSpec::identity();
        let pts = h.sample(5, &chart_grid(h.profile(), 3).unwrap()).unwrap();
        let set = pull_back(&spec, &h, &pts).unwrap();
        let meta = WarpMetadata::new(&spec, &classify_warped(&spec, &h), &set);
        let v: serde_json::Value = serde_json::from_str(&meta.to_json()).unwrap();
        assert_eq!(v["delta"], "inf");
        assert_eq!(v["topology"], "sphere");
        assert_eq!(v["complete"], true);
    }
}
