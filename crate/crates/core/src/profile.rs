//! The rho-function of an umbilical graph and its height profile.
//!
//! `rho` solves `rho' + lambda(s) rho = 0`; the height is
//! `phi(s) = int_{s_min}^s rho / sqrt(1 - rho^2)`. Wherever `rho` reaches 1
//! with nonzero slope the integrand has an inverse-square-root singularity;
//! on a terminal subinterval next to such an endpoint the integral is taken
//! in the variable `u = rho(s)`, where the singularity sits exactly at `u = 1`.

use crate::error::{out_of_domain, Error, Result};
use crate::families::{FamilyKind, FamilySpec, LambdaTable};
use crate::quadrature::{QuadResult, TanhSinh};
use crate::roots::{bisect_sign_change, invert_monotone};
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

/// `pi/2 - FRAC_PI_2`.
const PI_2_LOW: f64 = 6.123233995736766e-17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    RhoReachesOne,
    RhoDecaysToZero,
    Truncated,
}

impl EndpointKind {
    pub fn name(&self) -> &'static str {
        match self {
            EndpointKind::RhoReachesOne => "rho_reaches_one",
            EndpointKind::RhoDecaysToZero => "rho_decays_to_zero",
            EndpointKind::Truncated => "truncated",
        }
    }
}

/// Export-level truncation of unbounded profiles.
#[derive(Clone, Copy, Debug)]
pub struct ProfileOptions {
    /// Horosphere-type profiles stop where `rho` falls below this value.
    pub rho_floor: f64,
    /// Unbounded height profiles stop where `phi` exceeds this value.
    pub phi_cap: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            rho_floor: 1e-6,
            phi_cap: 25.0,
        }
    }
}

/// Limit of `phi` at the far end of the profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum VerticalExtent {
    /// Finite limit `t0` at an endpoint where `rho -> 1`.
    Finite(f64),
    /// `phi -> +inf`.
    Unbounded,
    /// `phi` increases to this supremum as `s -> inf`.
    Supremum(f64),
    /// Table ended before `rho` reached 1; value at the cut.
    Truncated(f64),
}

impl VerticalExtent {
    pub fn finite(&self) -> Option<f64> {
        match self {
            VerticalExtent::Finite(t) => Some(*t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
enum RhoModel {
    /// `scale * sin s`
    Sine { scale: f64 },
    /// `scale * sinh s`
    Sinh { scale: f64 },
    /// `e^{-s}`
    Exp,
    /// `scale * cosh s`
    Cosh { scale: f64 },
    /// `c * exp(-int_start^s lambda)`
    Tabulated {
        c: f64,
        start: f64,
        table: Arc<LambdaTable>,
    },
}

impl RhoModel {
    fn rho(&self, s: f64) -> f64 {
        match self {
            RhoModel::Sine { scale } => scale * s.sin(),
            RhoModel::Sinh { scale } => scale * s.sinh(),
            RhoModel::Exp => (-s).exp(),
            RhoModel::Cosh { scale } => scale * s.cosh(),
            RhoModel::Tabulated { c, start, table } => {
                c * (-table.integral(*start, s).unwrap_or(f64::NAN)).exp()
            }
        }
    }

    /// `rho' = -lambda rho`, simplified in closed form for the built-ins.
    fn rho_prime(&self, s: f64) -> f64 {
        match self {
            RhoModel::Sine { scale } => scale * s.cos(),
            RhoModel::Sinh { scale } => scale * s.cosh(),
            RhoModel::Exp => -(-s).exp(),
            RhoModel::Cosh { scale } => scale * s.sinh(),
            RhoModel::Tabulated { table, .. } => {
                -table.eval(s).unwrap_or(f64::NAN) * self.rho(s)
            }
        }
    }

    fn one_minus_rho_sq(&self, s: f64) -> f64 {
        match self {
            RhoModel::Sine { scale } if *scale == 1.0 => {
                let c = s.cos();
                c * c
            }
            _ => {
                let r = self.rho(s);
                (1.0 - r) * (1.0 + r)
            }
        }
    }

    /// `s` with `rho(s) = u` on a monotone branch `[lo, hi]`.
    fn inverse(&self, u: f64, lo: f64, hi: f64) -> Result<f64> {
        let s = match self {
            RhoModel::Sine { scale } => (u / scale).min(1.0).asin(),
            RhoModel::Sinh { scale } => (u / scale).asinh(),
            RhoModel::Exp => -u.ln(),
            RhoModel::Cosh { scale } => {
                let a = (u / scale).max(1.0).acosh();
                if hi <= 0.0 {
                    -a
                } else {
                    a
                }
            }
            RhoModel::Tabulated { .. } => {
                return invert_monotone(
                    |s| self.rho(s),
                    |s| self.rho_prime(s),
                    u,
                    lo,
                    hi,
                    1e-15,
                )
                .or_else(|_| {
                    // the terminal value itself may round just outside the bracket
                    let (rl, rh) = (self.rho(lo), self.rho(hi));
                    if (u - rl).abs() <= (u - rh).abs() {
                        Ok(lo)
                    } else {
                        Ok(hi)
                    }
                });
            }
        };
        Ok(s.clamp(lo, hi))
    }
}

/// Quadrature over a terminal subinterval next to an endpoint with `rho = 1`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TerminalCheck {
    /// The endpoint `s` where `rho = 1`.
    pub endpoint: f64,
    /// Inner end of the terminal subinterval.
    pub inner: f64,
    /// One-sided second-order difference estimate of `rho'` at the endpoint.
    pub rho_prime: f64,
    /// Integral of `rho / sqrt(1 - rho^2)` over the terminal subinterval.
    pub integral: f64,
    pub error_estimate: f64,
}

#[derive(Clone, Debug)]
pub struct Profile {
    family: FamilySpec,
    c: f64,
    model: RhoModel,
    s_min: f64,
    s_max: f64,
    lower_singular: bool,
    endpoint: EndpointKind,
    s_lo: f64,
    s_hi: f64,
    phi_lo: f64,
    phi_hi: f64,
    total: Option<f64>,
    terminals: Vec<TerminalCheck>,
    quad: TanhSinh,
}

/// Endpoint of the admissible `s` range: where `rho -> 1`, or infinity for
/// horosphere families.
pub fn domain_limit(family: &FamilySpec, c: f64) -> Result<f64> {
    check_c(family.kind(), c)?;
    Ok(match family.kind() {
        FamilyKind::SphereSpherical => {
            if c == 1.0 {
                FRAC_PI_2
            } else if c > 1.0 {
                (1.0 / c).asin()
            } else {
                c.asin()
            }
        }
        FamilyKind::SphereHyperbolic => (1.0 / c).asinh(),
        FamilyKind::Horosphere => f64::INFINITY,
        FamilyKind::Equidistant => (1.0 / c).acosh(),
        FamilyKind::CustomLambda => {
            Profile::new(family.clone(), c, ProfileOptions::default())?.s_max
        }
    })
}

fn check_c(kind: FamilyKind, c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    if kind == FamilyKind::Equidistant && c >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "equidistant profiles require 0 < c < 1, got {c}"
        )));
    }
    Ok(())
}

impl Profile {
    /// Solves for `rho` with integration constant `c` and prepares the height
    /// profile.
    pub fn new(family: FamilySpec, c: f64, options: ProfileOptions) -> Result<Self> {
        check_c(family.kind(), c)?;
        if !(options.rho_floor > 0.0 && options.rho_floor < 1.0) || !(options.phi_cap > 0.0) {
            return Err(Error::InvalidParameter("truncation options out of range".into()));
        }
        let (model, c, s_min, s_max, lower_singular, endpoint) = match family.kind() {
            FamilyKind::SphereSpherical => {
                if c == 1.0 {
                    let cut = (-options.phi_cap).exp().acos();
                    (RhoModel::Sine { scale: 1.0 }, c, 0.0, cut, false, EndpointKind::Truncated)
                } else {
                    let scale = if c > 1.0 { c } else { 1.0 / c };
                    let a = domain_limit(&family, c)?;
                    (RhoModel::Sine { scale }, c, 0.0, a, false, EndpointKind::RhoReachesOne)
                }
            }
            FamilyKind::SphereHyperbolic => {
                let a = domain_limit(&family, c)?;
                (RhoModel::Sinh { scale: c }, c, 0.0, a, false, EndpointKind::RhoReachesOne)
            }
            // c is absorbed by a shift of s: every horosphere profile is the c = 1 one
            FamilyKind::Horosphere => (
                RhoModel::Exp,
                1.0,
                0.0,
                -options.rho_floor.ln(),
                true,
                EndpointKind::RhoDecaysToZero,
            ),
            FamilyKind::Equidistant => {
                let a = domain_limit(&family, c)?;
                (RhoModel::Cosh { scale: c }, c, -a, a, true, EndpointKind::RhoReachesOne)
            }
            FamilyKind::CustomLambda => {
                let table = family
                    .lambda_table()
                    .cloned()
                    .ok_or_else(|| Error::InvalidParameter("custom family without table".into()))?;
                let start = table.range().0;
                let model = RhoModel::Tabulated {
                    c,
                    start,
                    table: Arc::new(table),
                };
                let (lo, hi, lower, end) = admissible_range(&model, family.s_domain())?;
                (model, c, lo, hi, lower, end)
            }
        };
        let upper_singular = endpoint == EndpointKind::RhoReachesOne;
        let range = s_max - s_min;
        let width = terminal_width(&model, s_min, s_max, lower_singular, upper_singular);
        let s_lo = if lower_singular { s_min + width } else { s_min };
        let s_hi = if upper_singular { s_max - width } else { s_max };
        debug_assert!(s_lo <= s_hi && range > 0.0);

        let mut profile = Profile {
            family,
            c,
            model,
            s_min,
            s_max,
            lower_singular,
            endpoint,
            s_lo,
            s_hi,
            phi_lo: 0.0,
            phi_hi: 0.0,
            total: None,
            terminals: Vec::new(),
            quad: TanhSinh::default(),
        };

        if lower_singular {
            let r = profile.tail_integral(profile.model.rho(s_lo), s_min, s_lo)?;
            profile.phi_lo = r.value;
            profile.terminals.push(TerminalCheck {
                endpoint: s_min,
                inner: s_lo,
                rho_prime: profile.one_sided_rho_prime(s_min, 1.0),
                integral: r.value,
                error_estimate: r.error,
            });
        }
        profile.phi_hi = profile.phi_lo + profile.middle_integral(s_lo, s_hi)?.value;
        if upper_singular {
            let r = profile.tail_integral(profile.model.rho(s_hi), s_hi, s_max)?;
            profile.total = Some(profile.phi_hi + r.value);
            profile.terminals.push(TerminalCheck {
                endpoint: s_max,
                inner: s_hi,
                rho_prime: profile.one_sided_rho_prime(s_max, -1.0),
                integral: r.value,
                error_estimate: r.error,
            });
        }
        Ok(profile)
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `[s_min, s_max)`.
    pub fn s_range(&self) -> (f64, f64) {
        (self.s_min, self.s_max)
    }

    pub fn endpoint_kind(&self) -> EndpointKind {
        self.endpoint
    }

    /// Whether `rho(s_min) = 1`.
    pub fn lower_singular(&self) -> bool {
        self.lower_singular
    }

    pub fn terminal_checks(&self) -> &[TerminalCheck] {
        &self.terminals
    }

    fn check_s(&self, s: f64) -> Result<()> {
        let closed_top = self.total.is_some();
        let ok = s >= self.s_min && (s < self.s_max || (closed_top && s == self.s_max));
        if ok {
            Ok(())
        } else {
            Err(out_of_domain("s", s, (self.s_min, self.s_max)))
        }
    }

    pub fn rho(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        Ok(self.model.rho(s))
    }

    /// `rho'` from the ODE identity `rho' = -lambda rho`.
    pub fn rho_prime(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        Ok(self.model.rho_prime(s))
    }

    pub fn lambda(&self, s: f64) -> Result<f64> {
        self.family.lambda_of(s)
    }

    /// `sqrt(1 - rho^2)`, which equals the angle function of the graph.
    pub fn theta(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        Ok(self.model.one_minus_rho_sq(s).max(0.0).sqrt())
    }

    /// `phi' = rho / sqrt(1 - rho^2)`.
    pub fn phi_prime(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        Ok(self.model.rho(s) / self.model.one_minus_rho_sq(s).sqrt())
    }

    /// `phi(s)` normalized by `phi(s_min) = 0`.
    pub fn phi(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        if s == self.s_min {
            return Ok(0.0);
        }
        if let Some(total) = self.total {
            if s == self.s_max {
                return Ok(total);
            }
            if s > self.s_hi {
                let tail = self.tail_integral(self.model.rho(s), s, self.s_max)?;
                return Ok(total - tail.value);
            }
        }
        if self.lower_singular && s < self.s_lo {
            return Ok(self.tail_integral(self.model.rho(s), self.s_min, s)?.value);
        }
        if s - self.s_lo <= self.s_hi - s {
            Ok(self.phi_lo + self.middle_integral(self.s_lo, s)?.value)
        } else {
            Ok(self.phi_hi - self.middle_integral(s, self.s_hi)?.value)
        }
    }

    /// The `s` with `rho(s) = rho` on the monotone branch through `near`.
    pub fn s_with_rho(&self, rho: f64, near: f64) -> Result<f64> {
        self.check_s(near)?;
        let (lo, hi) = match self.model {
            RhoModel::Cosh { .. } if near < 0.0 => (self.s_min, 0.0),
            RhoModel::Cosh { .. } => (0.0, self.s_max),
            RhoModel::Tabulated { .. } => {
                return Err(Error::Unsupported("branch inversion of tabulated profiles".into()))
            }
            _ => (self.s_min, self.s_max),
        };
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(out_of_domain("rho", rho, (0.0, 1.0)));
        }
        self.model.inverse(rho, lo, hi)
    }

    pub fn vertical_half_extent(&self) -> Result<VerticalExtent> {
        Ok(match self.endpoint {
            EndpointKind::RhoReachesOne => VerticalExtent::Finite(self.total.expect("set for singular ends")),
            EndpointKind::RhoDecaysToZero => {
                // full branch in u = rho, from 0 (s = inf) up to rho(s_min) = 1
                let (lo, hi) = (self.s_min, f64::INFINITY);
                let model = &self.model;
                let r = self.quad.integrate(
                    |u, _, db| {
                        let s = match model.inverse(u, lo, hi) {
                            Ok(s) => s,
                            Err(_) => return f64::NAN,
                        };
                        u / (db * (1.0 + u)).sqrt() / model.rho_prime(s).abs()
                    },
                    0.0,
                    1.0,
                )?;
                VerticalExtent::Supremum(r.value)
            }
            EndpointKind::Truncated => {
                if self.family.kind() == FamilyKind::SphereSpherical {
                    VerticalExtent::Unbounded
                } else {
                    VerticalExtent::Truncated(self.phi(self.s_max.next_down_by(1))?)
                }
            }
        })
    }

    /// `int_a^b rho / sqrt(1 - rho^2) ds` with `a, b` away from singular ends.
    fn middle_integral(&self, a: f64, b: f64) -> Result<QuadResult> {
        let model = &self.model;
        if let RhoModel::Sine { scale } = model {
            if *scale == 1.0 {
                // sqrt(1 - sin^2 s) = sin(pi/2 - s), with the distance to pi/2
                // taken from the quadrature node rather than from s
                let gap = (FRAC_PI_2 - b) + PI_2_LOW;
                return self.quad.integrate(|s, _, db| s.sin() / (gap + db).sin(), a, b);
            }
        }
        self.quad
            .integrate(|s, _, _| model.rho(s) / model.one_minus_rho_sq(s).sqrt(), a, b)
    }

    /// Integral over `[a, b]`, a terminal subinterval where one end has
    /// `rho = 1`, written as `int_{rho_inner}^1 u / sqrt(1 - u^2) / |rho'(s(u))| du`.
    fn tail_integral(&self, rho_inner: f64, a: f64, b: f64) -> Result<QuadResult> {
        if rho_inner >= 1.0 {
            return Ok(QuadResult {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            });
        }
        let model = &self.model;
        let (lo, hi) = (a.min(b), a.max(b));
        self.quad.integrate(
            |u, _, db| {
                let s = match model.inverse(u, lo, hi) {
                    Ok(s) => s,
                    Err(_) => return f64::NAN,
                };
                u / (db * (1.0 + u)).sqrt() / model.rho_prime(s).abs()
            },
            rho_inner,
            1.0,
        )
    }

    fn one_sided_rho_prime(&self, end: f64, direction: f64) -> f64 {
        let h = 1e-4 * (self.s_max - self.s_min).min(1.0);
        let r = |k: f64| self.model.rho(end + direction * k * h);
        direction * (-3.0 * r(0.0) + 4.0 * r(1.0) - r(2.0)) / (2.0 * h)
    }
}

trait NextDown {
    fn next_down_by(self, ulps: u64) -> f64;
}

impl NextDown for f64 {
    fn next_down_by(self, ulps: u64) -> f64 {
        f64::from_bits(self.to_bits() - ulps)
    }
}

fn terminal_width(model: &RhoModel, s_min: f64, s_max: f64, lower: bool, upper: bool) -> f64 {
    let range = s_max - s_min;
    let mut w = (0.25 * range).min(1.0);
    if let RhoModel::Tabulated { .. } = model {
        // rho must stay monotone, with |rho'| bounded away from zero
        let monotone = |from: f64, to: f64| {
            let d0 = model.rho_prime(from);
            (0..=64).all(|k| {
                let s = from + (to - from) * k as f64 / 64.0;
                let d = model.rho_prime(s);
                d.signum() == d0.signum() && d.abs() >= 0.25 * d0.abs()
            })
        };
        while w > 1e-6 * range
            && !((!lower || monotone(s_min, s_min + w)) && (!upper || monotone(s_max, s_max - w)))
        {
            w *= 0.5;
        }
    }
    w
}

/// First maximal interval of the table range on which `0 < rho < 1`.
fn admissible_range(model: &RhoModel, (t0, t1): (f64, f64)) -> Result<(f64, f64, bool, EndpointKind)> {
    let steps = 4096;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| t0 + (t1 - t0) * k as f64 / steps as f64)
        .collect();
    let below = |s: f64| model.rho(s) < 1.0;
    let first = grid
        .iter()
        .position(|&s| below(s))
        .ok_or_else(|| Error::InvalidParameter("rho never drops below 1 on the lambda table".into()))?;
    let g = |s: f64| model.rho(s) - 1.0;
    let (s_min, lower) = if first == 0 {
        (t0, false)
    } else {
        let s = bisect_sign_change(g, grid[first - 1], grid[first]);
        if model.rho_prime(s).abs() < 1e-8 {
            return Err(Error::InvalidParameter(
                "rho reaches 1 with zero slope at the lower end; height integral diverges".into(),
            ));
        }
        (s, true)
    };
    let (s_max, end) = match grid[first..].iter().position(|&s| !below(s)) {
        Some(k) => {
            let j = first + k;
            let s = bisect_sign_change(g, grid[j - 1], grid[j]);
            if model.rho_prime(s).abs() < 1e-8 {
                return Err(Error::InvalidParameter(
                    "rho reaches 1 with zero slope at the upper end; height integral diverges".into(),
                ));
            }
            (s, EndpointKind::RhoReachesOne)
        }
        None => (t1, EndpointKind::Truncated),
    };
    if !(s_max - s_min > 1e-9 * (t1 - t0)) {
        return Err(Error::InvalidParameter(
            "lambda table does not cover a positive-length admissible range".into(),
        ));
    }
    Ok((s_min, s_max, lower, end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::SpaceFormId;
    use approx::assert_abs_diff_eq;

    fn sphere_s() -> FamilySpec {
        FamilySpec::sphere(SpaceFormId::sphere(2).unwrap()).unwrap()
    }
    fn sphere_h() -> FamilySpec {
        FamilySpec::sphere(SpaceFormId::hyperbolic(2).unwrap()).unwrap()
    }
    fn horo() -> FamilySpec {
        FamilySpec::horosphere(SpaceFormId::hyperbolic(2).unwrap()).unwrap()
    }
    fn equi() -> FamilySpec {
        FamilySpec::equidistant(SpaceFormId::hyperbolic(2).unwrap()).unwrap()
    }
    fn profile(f: FamilySpec, c: f64) -> Profile {
        Profile::new(f, c, ProfileOptions::default()).unwrap()
    }

    #[test]
    fn solve_rho_examples() {
        let p = profile(sphere_s(), 1.0);
        assert_eq!(p.s_range().0, 0.0);
        assert!(p.s_range().1 < FRAC_PI_2);
        assert_abs_diff_eq!(p.rho(0.7).unwrap(), 0.7f64.sin(), epsilon = 1e-15);

        let p = profile(sphere_h(), 0.5);
        assert_abs_diff_eq!(p.s_range().1, 2f64.asinh(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.rho(1.0).unwrap(), 0.5 * 1f64.sinh(), epsilon = 1e-15);

        let p = profile(horo(), 1.0);
        assert_eq!(p.s_range().0, 0.0);
        assert_abs_diff_eq!(p.rho(2.0).unwrap(), (-2f64).exp(), epsilon = 1e-16);
        assert_eq!(p.endpoint_kind(), EndpointKind::RhoDecaysToZero);

        // c < 1 and c > 1 spherical profiles share rho
        let a = profile(sphere_s(), 0.5);
        let b = profile(sphere_s(), 2.0);
        assert_eq!(a.rho(0.3).unwrap(), b.rho(0.3).unwrap());
    }

    #[test]
    fn invalid_constants() {
        assert!(Profile::new(sphere_s(), 0.0, ProfileOptions::default()).is_err());
        assert!(Profile::new(sphere_s(), -1.0, ProfileOptions::default()).is_err());
        assert!(Profile::new(equi(), 1.0, ProfileOptions::default()).is_err());
        assert!(Profile::new(equi(), 1.5, ProfileOptions::default()).is_err());
    }

    #[test]
    fn domain_limit_examples() {
        assert_abs_diff_eq!(domain_limit(&sphere_s(), 2.0).unwrap(), std::f64::consts::FRAC_PI_6, epsilon = 1e-15);
        assert_abs_diff_eq!(domain_limit(&equi(), 0.5).unwrap(), 1.3169578969248166, epsilon = 1e-14);
        assert_eq!(domain_limit(&sphere_s(), 1.0).unwrap(), FRAC_PI_2);
        assert_eq!(domain_limit(&horo(), 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn phi_examples() {
        let p = profile(sphere_s(), 1.0);
        assert_abs_diff_eq!(p.phi(1.0).unwrap(), 0.6156264703860142, epsilon = 1e-13);
        assert_eq!(p.phi(0.0).unwrap(), 0.0);
        let h = profile(horo(), 1.0);
        assert_abs_diff_eq!(h.phi(1.0).unwrap(), 1.1940688187363215, epsilon = 1e-13);
        let e = profile(equi(), 0.5);
        assert_eq!(e.phi(e.s_range().0).unwrap(), 0.0);
        assert!(p.phi(-0.1).is_err());
        assert!(p.phi(1.6).is_err());
    }

    #[test]
    fn vertical_half_extent_examples() {
        let p = profile(sphere_s(), 2.0);
        let t0 = p.vertical_half_extent().unwrap().finite().unwrap();
        assert_abs_diff_eq!(t0, (2.0 / 3f64.sqrt()).acosh(), epsilon = 1e-12);
        assert_eq!(profile(sphere_s(), 1.0).vertical_half_extent().unwrap(), VerticalExtent::Unbounded);
        match profile(horo(), 1.0).vertical_half_extent().unwrap() {
            VerticalExtent::Supremum(v) => assert_abs_diff_eq!(v, FRAC_PI_2, epsilon = 1e-13),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equidistant_profile_is_symmetric() {
        let e = profile(equi(), 0.3);
        let (lo, hi) = e.s_range();
        let total = e.vertical_half_extent().unwrap().finite().unwrap();
        for &s in &[0.1, 0.5, 1.0, hi * 0.99] {
            assert_abs_diff_eq!(e.phi(s).unwrap() + e.phi(-s).unwrap(), total, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(e.phi(0.0).unwrap(), 0.5 * total, epsilon = 1e-12);
        assert_eq!(lo, -hi);
    }

    #[test]
    fn terminal_quadratures_converge() {
        for (f, c) in [(sphere_s(), 2.0), (sphere_s(), 0.3), (sphere_h(), 0.5), (sphere_h(), 2.0), (horo(), 1.0), (equi(), 0.5), (equi(), 0.3)] {
            let p = profile(f, c);
            assert!(!p.terminal_checks().is_empty());
            for t in p.terminal_checks() {
                assert!(t.error_estimate < 1e-10);
                assert!(t.rho_prime.abs() > 1e-3);
                assert!((p.model.rho(t.endpoint) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn custom_table_reproduces_equidistant() {
        // lambda = -tanh s tabulated densely; c = 0.5 starting at s = 0 has
        // rho = 0.5 cosh s, reaching 1 at acosh 2
        let s: Vec<f64> = (0..=400).map(|k| k as f64 * 0.005).collect();
        let l: Vec<f64> = s.iter().map(|x| -x.tanh()).collect();
        let table = LambdaTable::new(s, l).unwrap();
        let f = FamilySpec::custom(SpaceFormId::hyperbolic(2).unwrap(), table);
        let p = profile(f, 0.5);
        assert_eq!(p.endpoint_kind(), EndpointKind::RhoReachesOne);
        assert_abs_diff_eq!(p.s_range().1, 2f64.acosh(), epsilon = 1e-7);
        let reference = profile(equi(), 0.5);
        let offset = reference.phi(0.0).unwrap();
        let total = reference.vertical_half_extent().unwrap().finite().unwrap();
        let t = p.vertical_half_extent().unwrap().finite().unwrap();
        assert_abs_diff_eq!(t, total - offset, epsilon = 1e-6);
        assert_abs_diff_eq!(p.phi(0.8).unwrap(), reference.phi(0.8).unwrap() - offset, epsilon = 1e-7);
    }

    #[test]
    fn custom_table_lower_crossing_and_truncation() {
        // lambda = 1: rho = c e^{-(s - s0)}; with c = 2 the admissible range
        // starts where rho drops through 1, like a horosphere profile
        let s: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        let l = vec![1.0; s.len()];
        let f = FamilySpec::custom(SpaceFormId::hyperbolic(2).unwrap(), LambdaTable::new(s, l).unwrap());
        let p = profile(f, 2.0);
        assert!(p.lower_singular());
        assert_eq!(p.endpoint_kind(), EndpointKind::Truncated);
        let s0 = 2f64.ln();
        assert_abs_diff_eq!(p.s_range().0, s0, epsilon = 1e-12);
        let expect = FRAC_PI_2 - (-(2.0 - s0)).exp().asin();
        assert_abs_diff_eq!(p.phi(2.0).unwrap(), expect, epsilon = 1e-10);
        assert!(matches!(p.vertical_half_extent().unwrap(), VerticalExtent::Truncated(_)));
    }

    #[test]
    fn custom_table_without_admissible_range() {
        let table = LambdaTable::new(vec![0.0, 1.0], vec![-1.0, -1.0]).unwrap();
        let f = FamilySpec::custom(SpaceFormId::hyperbolic(2).unwrap(), table);
        assert!(Profile::new(f, 3.0, ProfileOptions::default()).is_err());
    }
}
