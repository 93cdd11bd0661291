//! Graphs `{(f_s(p), phi(s))}` in `Q^n x R`.
//!
//! Product points are stored as ambient vectors `(x_0, ..., x_n, t)`, the
//! model coordinates of the base followed by the height. The product metric
//! is the model inner product plus `dt^2`.

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::profile::Profile;
use crate::spaceform::{inner, ModelPoint};
use crate::verify::{shape_operator_flat, GraphSurface};
use std::io::Write;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductPoint {
    pub base: ModelPoint,
    pub height: f64,
}

impl ProductPoint {
    pub fn new(base: ModelPoint, height: f64) -> Self {
        ProductPoint { base, height }
    }

    /// `(x_0, ..., x_n, t)`.
    pub fn ambient(&self) -> Vec<f64> {
        let mut v = self.base.coords().to_vec();
        v.push(self.height);
        v
    }
}

/// Product inner product of two ambient vectors `(x, t)`.
pub fn product_inner(epsilon: i8, u: &[f64], v: &[f64]) -> f64 {
    let k = u.len() - 1;
    inner(epsilon, &u[..k], &v[..k]) + u[k] * v[k]
}

#[derive(Clone, Debug)]
pub struct GraphPoint {
    pub s: f64,
    pub chart: Vec<f64>,
    pub position: ProductPoint,
    /// Unit normal `(-rho eta_s, theta)`.
    pub normal: Vec<f64>,
    /// Angle function `<N, d/dt>`.
    pub theta: f64,
    /// Gradient of the height function, `d/dt - theta N`.
    pub t_field: Vec<f64>,
    pub curvatures: Vec<f64>,
}

impl GraphPoint {
    /// The common value of the principal curvatures.
    pub fn umbilical_value(&self) -> f64 {
        self.curvatures[0]
    }
}

pub fn eval_graph(profile: &Profile, s: f64, chart: &[f64]) -> Result<GraphPoint> {
    let family = profile.family();
    let leaf = family.eval_family(s, chart)?;
    let rho = profile.rho(s)?;
    let theta = profile.theta(s)?;
    let height = profile.phi(s)?;

    let mut normal: Vec<f64> = leaf.normal.coords().iter().map(|e| -rho * e).collect();
    normal.push(theta);
    let mut t_field: Vec<f64> = normal.iter().map(|v| -theta * v).collect();
    *t_field.last_mut().expect("nonempty") += 1.0;

    let curvatures = if s == profile.s_range().0 && leaf.lambda.is_infinite() {
        // centre of a geodesic-sphere family: rho = 0, rho' = -lambda rho stays finite
        vec![profile.rho_prime(s)?; family.space().dim()]
    } else {
        analytic_curvatures(profile, s)?
    };
    Ok(GraphPoint {
        s,
        chart: chart.to_vec(),
        position: ProductPoint::new(leaf.point, height),
        normal,
        theta,
        t_field,
        curvatures,
    })
}

/// `-rho lambda` for the leaf directions and `rho' = -lambda rho` for the
/// profile direction.
pub fn analytic_curvatures(profile: &Profile, s: f64) -> Result<Vec<f64>> {
    let n = profile.family().space().dim();
    let value = -profile.rho(s)? * profile.lambda(s)?;
    Ok(vec![value; n])
}

/// `|A T - k_n T| / |T|` with the shape operator from the flat oracle.
pub fn t_principal_direction_check(profile: &Profile, point: &GraphPoint, h: f64) -> Result<f64> {
    let eps = profile.family().space().epsilon();
    let t_norm = product_inner(eps, &point.t_field, &point.t_field).sqrt();
    if t_norm < 1e-8 {
        return Err(Error::Degenerate("horizontal point: T vanishes".into()));
    }
    let surface = GraphSurface::new(profile.clone());
    let params = surface.params_of(point.s, &point.chart);
    let op = shape_operator_flat(&surface, &params, h)?;

    // coordinates of T in the parameter tangent basis, by least squares in
    // the product metric
    let n = op.tangents.len();
    let g = nalgebra::DMatrix::from_fn(n, n, |a, b| product_inner(eps, &op.tangents[a], &op.tangents[b]));
    let rhs = nalgebra::DVector::from_fn(n, |a, _| product_inner(eps, &op.tangents[a], &point.t_field));
    let coeff = g
        .cholesky()
        .ok_or_else(|| Error::Degenerate("singular first fundamental form".into()))?
        .solve(&rhs);
    let image = &op.operator * &coeff;
    let k_n = point.curvatures[n - 1];
    let mut diff = vec![0.0; point.t_field.len()];
    for a in 0..n {
        let w = image[a] - k_n * coeff[a];
        diff.iter_mut().zip(&op.tangents[a]).for_each(|(d, x)| *d += w * x);
    }
    Ok(product_inner(eps, &diff, &diff).max(0.0).sqrt() / t_norm)
}

/// Point cloud over a grid of `(s, chart)` samples.
pub fn sample_graph(profile: &Profile, samples: &[(f64, Vec<f64>)]) -> Result<Vec<GraphPoint>> {
    use rayon::prelude::*;
    samples
        .par_iter()
        .map(|(s, chart)| eval_graph(profile, *s, chart))
        .collect()
}

/// CSV with columns `s, chart_1.., x_0.., t, theta, k`.
pub fn write_point_cloud_csv<W: Write>(family: &FamilySpec, points: &[GraphPoint], mut out: W) -> Result<()> {
    let n = family.space().dim();
    let mut header = vec!["s".to_string()];
    header.extend((1..n).map(|i| format!("chart_{i}")));
    header.extend((0..=n).map(|i| format!("x_{i}")));
    header.extend(["t", "theta", "k"].map(String::from));
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let mut row = vec![p.s];
        row.extend_from_slice(&p.chart);
        row.extend_from_slice(p.position.base.coords());
        row.extend([p.position.height, p.theta, p.umbilical_value()]);
        writeln!(out, "{}", crate::export::csv_row(&row))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileOptions;
    use crate::spaceform::SpaceFormId;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn profile(f: FamilySpec, c: f64) -> Profile {
        Profile::new(f, c, ProfileOptions::default()).unwrap()
    }

    fn families(n: usize) -> Vec<(FamilySpec, f64)> {
        let s = SpaceFormId::sphere(n).unwrap();
        let h = SpaceFormId::hyperbolic(n).unwrap();
        vec![
            (FamilySpec::sphere(s).unwrap(), 2.0),
            (FamilySpec::sphere(s).unwrap(), 0.5),
            (FamilySpec::sphere(h).unwrap(), 0.5),
            (FamilySpec::horosphere(h).unwrap(), 1.0),
            (FamilySpec::equidistant(h).unwrap(), 0.5),
        ]
    }

    fn chart_for(f: &FamilySpec) -> Vec<f64> {
        let d = f.chart_dim();
        if f.kind().is_sphere() {
            let mut c = vec![1.1; d];
            c[d - 1] = 0.4;
            c
        } else {
            (0..d).map(|i| 0.3 - 0.5 * i as f64).collect()
        }
    }

    #[test]
    fn center_point_is_horizontal() {
        let f = FamilySpec::sphere(SpaceFormId::sphere(2).unwrap()).unwrap();
        let p = profile(f, 1.0);
        let g = eval_graph(&p, 0.0, &[0.3]).unwrap();
        assert_eq!(g.position.base.coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(g.position.height, 0.0);
        assert_eq!(g.theta, 1.0);
        assert!(g.t_field.iter().all(|v| v.abs() < 1e-15));
        assert_abs_diff_eq!(g.umbilical_value(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn horosphere_angle_function() {
        let f = FamilySpec::horosphere(SpaceFormId::hyperbolic(2).unwrap()).unwrap();
        let p = profile(f, 1.0);
        let g = eval_graph(&p, 1.0, &[0.2]).unwrap();
        assert_abs_diff_eq!(g.theta, 0.9298734950321937, epsilon = 1e-12);
        let rho = (-1f64).exp();
        let dphi = rho / (1.0 - rho * rho).sqrt();
        assert_abs_diff_eq!(g.theta, 1.0 / (1.0 + dphi * dphi).sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn normal_is_unit_and_normal_to_the_graph() {
        for n in [2, 3] {
            for (f, c) in families(n) {
                let p = profile(f.clone(), c);
                let (lo, hi) = p.s_range();
                let s = lo + 0.4 * (hi.min(lo + 4.0) - lo);
                let chart = chart_for(&f);
                let g = eval_graph(&p, s, &chart).unwrap();
                let e = f.space().epsilon();
                assert_abs_diff_eq!(product_inner(e, &g.normal, &g.normal), 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!(g.theta, (1.0 - p.rho(s).unwrap().powi(2)).sqrt(), epsilon = 1e-10);
                // tangent directions by central differences
                let h = 1e-6;
                let x = |s: f64, chart: &[f64]| eval_graph(&p, s, chart).unwrap().position.ambient();
                let mut dirs = vec![x(s + h, &chart)
                    .iter()
                    .zip(x(s - h, &chart))
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect::<Vec<_>>()];
                for i in 0..chart.len() {
                    let mut cp = chart.clone();
                    let mut cm = chart.clone();
                    cp[i] += h;
                    cm[i] -= h;
                    dirs.push(x(s, &cp).iter().zip(x(s, &cm)).map(|(a, b)| (a - b) / (2.0 * h)).collect());
                }
                for d in &dirs {
                    let scale = product_inner(e, d, d).abs().sqrt().max(1.0);
                    assert!(product_inner(e, &g.normal, d).abs() < 1e-8 * scale, "{:?}", f.kind());
                }
                // T = d/dt - theta N
                let mut dt = vec![0.0; g.normal.len()];
                *dt.last_mut().unwrap() = 1.0;
                for ((t, d), nn) in g.t_field.iter().zip(&dt).zip(&g.normal) {
                    assert_abs_diff_eq!(*t, d - g.theta * nn, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn analytic_curvature_examples() {
        let h = SpaceFormId::hyperbolic(2).unwrap();
        let e = profile(FamilySpec::equidistant(h).unwrap(), 0.5);
        assert!(analytic_curvatures(&e, 0.0).unwrap().iter().all(|k| *k == 0.0));
        let s = profile(FamilySpec::sphere(SpaceFormId::sphere(2).unwrap()).unwrap(), 1.0);
        for k in analytic_curvatures(&s, FRAC_PI_4).unwrap() {
            assert_abs_diff_eq!(k, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        }
        let sh = profile(FamilySpec::sphere(h).unwrap(), 0.5);
        for k in analytic_curvatures(&sh, 1.0).unwrap() {
            assert_abs_diff_eq!(k, 0.5 * 1f64.cosh(), epsilon = 1e-15);
        }
        // the profile-direction entry equals rho'
        assert_abs_diff_eq!(analytic_curvatures(&sh, 1.0).unwrap()[1], sh.rho_prime(1.0).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn t_is_a_principal_direction() {
        let h = SpaceFormId::hyperbolic(2).unwrap();
        let e = profile(FamilySpec::equidistant(h).unwrap(), 0.5);
        let g = eval_graph(&e, 0.5, &[0.1]).unwrap();
        assert!(t_principal_direction_check(&e, &g, 1e-3).unwrap() <= 1e-5);
        let s = profile(FamilySpec::sphere(SpaceFormId::sphere(3).unwrap()).unwrap(), 2.0);
        let g = eval_graph(&s, 0.3, &[1.2, 0.5]).unwrap();
        assert!(t_principal_direction_check(&s, &g, 1e-3).unwrap() <= 1e-5);
        let g = eval_graph(&s, 0.0, &[1.2, 0.5]).unwrap();
        assert!(t_principal_direction_check(&s, &g, 1e-3).is_err());
    }

    #[test]
    fn point_cloud_csv_layout() {
        let f = FamilySpec::sphere(SpaceFormId::sphere(3).unwrap()).unwrap();
        let p = profile(f.clone(), 2.0);
        let pts = sample_graph(&p, &[(0.1, vec![1.0, 2.0]), (0.2, vec![1.0, 2.0])]).unwrap();
        let mut buf = Vec::new();
        write_point_cloud_csv(&f, &pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "s,chart_1,chart_2,x_0,x_1,x_2,x_3,t,theta,k");
        assert_eq!(lines.next().unwrap().split(',').count(), 10);
    }
}
