//! Isoparametric parallel families of totally umbilical hypersurfaces of
//! `S^n` and `H^n`: geodesic spheres, horospheres and equidistant
//! hypersurfaces, plus a tabulated umbilical function for experiments that
//! only need the profile.

use crate::error::{out_of_domain, Error, Result};
use crate::interp::{parse_two_column_csv, MonotoneCubic};
use crate::spaceform::{
    inner, project_tangent, tangent_frame, trig, ConformalChart, ModelPoint, SpaceFormId,
    TangentVector,
};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

pub const DEFAULT_CHART_HALF_WIDTH: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    SphereSpherical,
    SphereHyperbolic,
    Horosphere,
    Equidistant,
    CustomLambda,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::SphereSpherical => "sphere_spherical",
            FamilyKind::SphereHyperbolic => "sphere_hyperbolic",
            FamilyKind::Horosphere => "horosphere",
            FamilyKind::Equidistant => "equidistant",
            FamilyKind::CustomLambda => "custom_lambda",
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, FamilyKind::SphereSpherical | FamilyKind::SphereHyperbolic)
    }
}

/// Geometric data fixing one member of a family type.
#[derive(Clone, Debug)]
pub enum Anchor {
    /// Centre of concentric geodesic spheres.
    Center(ModelPoint),
    /// A point `base` of the leaf `s = 0` and the lightlike vector `ideal`
    /// of the common ideal point, normalized by `<base, ideal>_L = -1`.
    Horosphere { base: ModelPoint, ideal: Vec<f64> },
    /// A point `base` of the totally geodesic leaf `s = 0` and its unit
    /// spacelike normal `axis`.
    Equidistant { base: ModelPoint, axis: Vec<f64> },
    /// Tabulated families carry no point set.
    Tabulated,
}

#[derive(Clone, Debug)]
pub struct LambdaTable {
    interp: MonotoneCubic,
}

impl LambdaTable {
    pub fn new(s: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        Ok(LambdaTable {
            interp: MonotoneCubic::new(s, lambda)?,
        })
    }

    /// Parses the two-column `s,lambda` CSV format.
    pub fn from_csv(text: &str) -> Result<Self> {
        let (s, l) = parse_two_column_csv(text, ("s", "lambda"))?;
        Self::new(s, l)
    }

    pub fn range(&self) -> (f64, f64) {
        self.interp.range()
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.interp.eval(s)
    }

    /// Exact integral of the interpolated umbilical function.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        self.interp.integral(a, b)
    }

    pub fn knots(&self) -> &[f64] {
        self.interp.knots()
    }
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    kind: FamilyKind,
    space: SpaceFormId,
    anchor: Anchor,
    s_domain: (f64, f64),
    lambda_table: Option<Arc<LambdaTable>>,
    /// Orthonormal frame `(o, v_1, ..., v_n)` at the anchor point. For
    /// horospheres `v_n` points to the ideal point, for equidistants it is
    /// the axis.
    frame: Vec<Vec<f64>>,
    chart_half_width: f64,
}

/// `f_s(p)` together with the unit normal `eta_s(p) = d f_s / ds` and the
/// umbilical constant of the leaf.
#[derive(Clone, Debug)]
pub struct FamilyPointEval {
    pub point: ModelPoint,
    pub normal: TangentVector,
    pub lambda: f64,
}

impl FamilySpec {
    /// Concentric geodesic spheres about `e_0`.
    pub fn sphere(space: SpaceFormId) -> Result<Self> {
        Self::sphere_about(ModelPoint::origin(space))
    }

    pub fn sphere_about(center: ModelPoint) -> Result<Self> {
        if !center.is_valid() {
            return Err(Error::InvalidParameter("sphere centre is not on the model quadric".into()));
        }
        let space = center.space();
        let n = space.dim();
        let mut frame = vec![center.coords().to_vec()];
        frame.extend(tangent_frame(&center, &[], n)?);
        let (kind, s_domain) = if space.is_spherical() {
            (FamilyKind::SphereSpherical, (0.0, FRAC_PI_2))
        } else {
            (FamilyKind::SphereHyperbolic, (0.0, f64::INFINITY))
        };
        Ok(FamilySpec {
            kind,
            space,
            anchor: Anchor::Center(center),
            s_domain,
            lambda_table: None,
            frame,
            chart_half_width: DEFAULT_CHART_HALF_WIDTH,
        })
    }

    /// Parallel horospheres through `e_0` with ideal point `e_0 + e_n`.
    pub fn horosphere(space: SpaceFormId) -> Result<Self> {
        let base = ModelPoint::origin(space);
        let mut ideal = vec![0.0; space.ambient_dim()];
        ideal[0] = 1.0;
        ideal[space.dim()] = 1.0;
        Self::horosphere_anchored(base, ideal)
    }

    pub fn horosphere_anchored(base: ModelPoint, ideal: Vec<f64>) -> Result<Self> {
        let space = base.space();
        if space.is_spherical() {
            return Err(Error::InvalidParameter("horospheres require H^n".into()));
        }
        if ideal.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                got: ideal.len(),
            });
        }
        let scale = ideal.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 || inner(-1, &ideal, &ideal).abs() > 1e-10 * scale * scale {
            return Err(Error::InvalidParameter("horosphere anchor must be a nonzero lightlike vector".into()));
        }
        if (inner(-1, base.coords(), &ideal) + 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter("horosphere anchor must satisfy <o, l>_L = -1".into()));
        }
        // l - o is a unit tangent vector at o pointing to the ideal point
        let w: Vec<f64> = ideal.iter().zip(base.coords()).map(|(l, o)| l - o).collect();
        let w = project_tangent(&base, &w)?.into_coords();
        let n = space.dim();
        let mut frame = vec![base.coords().to_vec()];
        frame.extend(tangent_frame(&base, std::slice::from_ref(&w), n - 1)?);
        frame.push(w);
        Ok(FamilySpec {
            kind: FamilyKind::Horosphere,
            space,
            anchor: Anchor::Horosphere { base, ideal },
            s_domain: (f64::NEG_INFINITY, f64::INFINITY),
            lambda_table: None,
            frame,
            chart_half_width: DEFAULT_CHART_HALF_WIDTH,
        })
    }

    /// Hypersurfaces equidistant from the totally geodesic `{x_n = 0}`.
    pub fn equidistant(space: SpaceFormId) -> Result<Self> {
        let base = ModelPoint::origin(space);
        let mut axis = vec![0.0; space.ambient_dim()];
        axis[space.dim()] = 1.0;
        Self::equidistant_anchored(base, axis)
    }

    pub fn equidistant_anchored(base: ModelPoint, axis: Vec<f64>) -> Result<Self> {
        let space = base.space();
        if space.is_spherical() {
            return Err(Error::InvalidParameter("equidistant hypersurfaces require H^n".into()));
        }
        if axis.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                got: axis.len(),
            });
        }
        if (inner(-1, &axis, &axis) - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter("equidistant anchor must be a unit spacelike vector".into()));
        }
        if inner(-1, base.coords(), &axis).abs() > 1e-10 {
            return Err(Error::InvalidParameter(
                "equidistant base point must lie on the totally geodesic leaf".into(),
            ));
        }
        let n = space.dim();
        let mut frame = vec![base.coords().to_vec()];
        frame.extend(tangent_frame(&base, std::slice::from_ref(&axis), n - 1)?);
        frame.push(axis.clone());
        Ok(FamilySpec {
            kind: FamilyKind::Equidistant,
            space,
            anchor: Anchor::Equidistant { base, axis },
            s_domain: (f64::NEG_INFINITY, f64::INFINITY),
            lambda_table: None,
            frame,
            chart_half_width: DEFAULT_CHART_HALF_WIDTH,
        })
    }

    /// A family known only through its tabulated umbilical function.
    pub fn custom(space: SpaceFormId, table: LambdaTable) -> Self {
        let s_domain = table.range();
        FamilySpec {
            kind: FamilyKind::CustomLambda,
            space,
            anchor: Anchor::Tabulated,
            s_domain,
            lambda_table: Some(Arc::new(table)),
            frame: Vec::new(),
            chart_half_width: DEFAULT_CHART_HALF_WIDTH,
        }
    }

    pub fn with_chart_half_width(mut self, l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!("chart half-width must be positive, got {l}")));
        }
        self.chart_half_width = l;
        Ok(self)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn space(&self) -> SpaceFormId {
        self.space
    }

    pub fn anchor(&self) -> &Anchor {
        &self.anchor
    }

    pub fn s_domain(&self) -> (f64, f64) {
        self.s_domain
    }

    pub fn lambda_table(&self) -> Option<&LambdaTable> {
        self.lambda_table.as_deref()
    }

    pub fn chart_half_width(&self) -> f64 {
        self.chart_half_width
    }

    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    /// Number of chart coordinates of a leaf.
    pub fn chart_dim(&self) -> usize {
        self.space.dim() - 1
    }

    fn check_lambda_domain(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.s_domain;
        let ok = match self.kind {
            FamilyKind::SphereSpherical | FamilyKind::SphereHyperbolic => s > lo && s <= hi,
            _ => s >= lo && s <= hi,
        };
        if ok {
            Ok(())
        } else {
            Err(out_of_domain("s", s, self.s_domain))
        }
    }

    /// Umbilical constant of the leaf `f_s` with respect to `eta_s`.
    pub fn lambda_of(&self, s: f64) -> Result<f64> {
        self.check_lambda_domain(s)?;
        Ok(match self.kind {
            FamilyKind::SphereSpherical => -1.0 / s.tan(),
            FamilyKind::SphereHyperbolic => -1.0 / s.tanh(),
            FamilyKind::Horosphere => 1.0,
            FamilyKind::Equidistant => -s.tanh(),
            FamilyKind::CustomLambda => self
                .lambda_table
                .as_ref()
                .expect("custom family carries a table")
                .eval(s)?,
        })
    }

    pub fn principal_curvatures_of_leaf(&self, s: f64) -> Result<Vec<f64>> {
        Ok(vec![self.lambda_of(s)?; self.chart_dim()])
    }

    fn check_chart(&self, chart: &[f64]) -> Result<()> {
        if chart.len() != self.chart_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.chart_dim(),
                got: chart.len(),
            });
        }
        if self.kind.is_sphere() {
            for &a in &chart[..chart.len() - 1] {
                if !(0.0..=PI).contains(&a) {
                    return Err(out_of_domain("polar angle", a, (0.0, PI)));
                }
            }
        } else {
            let l = self.chart_half_width * (1.0 + 1e-12);
            for &y in chart {
                if y.abs() > l {
                    return Err(out_of_domain("chart coordinate", y, (-l, l)));
                }
            }
        }
        Ok(())
    }

    /// Unit direction at the centre for polar angles `(a_1, ..., a_{n-2}, b)`.
    /// The azimuth `b` turns in the `(v_1, v_2)` plane.
    fn sphere_direction(&self, chart: &[f64]) -> Vec<f64> {
        let n = self.space.dim();
        let mut c = vec![0.0; n];
        let mut prod = 1.0;
        for (j, a) in chart[..n - 2].iter().enumerate() {
            c[n - 1 - j] = prod * a.cos();
            prod *= a.sin();
        }
        let b = chart[n - 2];
        c[0] = prod * b.cos();
        c[1] = prod * b.sin();
        combine(&self.frame[1..], &c)
    }

    /// Point of the leaf `s = 0` with flat chart coordinates `y`.
    fn base_leaf_point(&self, y: &[f64]) -> Vec<f64> {
        let o = &self.frame[0];
        let n = self.space.dim();
        let tangent = combine(&self.frame[1..n], y);
        let r2: f64 = y.iter().map(|v| v * v).sum();
        match &self.anchor {
            Anchor::Horosphere { ideal, .. } => o
                .iter()
                .zip(&tangent)
                .zip(ideal)
                .map(|((a, t), l)| a + t + 0.5 * r2 * l)
                .collect(),
            _ => {
                let k = (1.0 + r2).sqrt();
                o.iter().zip(&tangent).map(|(a, t)| k * a + t).collect()
            }
        }
    }

    /// Closed-form evaluation of `f_s` at a chart point.
    pub fn eval_family(&self, s: f64, chart: &[f64]) -> Result<FamilyPointEval> {
        if self.kind == FamilyKind::CustomLambda {
            return Err(Error::Unsupported(
                "tabulated families have no point realization".into(),
            ));
        }
        let (lo, hi) = self.s_domain;
        if !(s >= lo && s <= hi) {
            return Err(out_of_domain("s", s, self.s_domain));
        }
        self.check_chart(chart)?;
        let lambda = if self.kind.is_sphere() && s == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.lambda_of(s)?
        };
        let (point, normal): (Vec<f64>, Vec<f64>) = match &self.anchor {
            Anchor::Center(o) => {
                let u = self.sphere_direction(chart);
                let (c, sn) = trig(self.space, s);
                let eps = self.space.eps();
                (
                    o.coords().iter().zip(&u).map(|(a, b)| c * a + sn * b).collect(),
                    o.coords().iter().zip(&u).map(|(a, b)| -eps * sn * a + c * b).collect(),
                )
            }
            Anchor::Horosphere { ideal, .. } => {
                let p = self.base_leaf_point(chart);
                let (e, sh, ch) = ((-s).exp(), s.sinh(), s.cosh());
                (
                    p.iter().zip(ideal).map(|(a, l)| e * a + sh * l).collect(),
                    p.iter().zip(ideal).map(|(a, l)| -e * a + ch * l).collect(),
                )
            }
            Anchor::Equidistant { axis, .. } => {
                let p = self.base_leaf_point(chart);
                let (sh, ch) = (s.sinh(), s.cosh());
                (
                    p.iter().zip(axis).map(|(a, e)| ch * a + sh * e).collect(),
                    p.iter().zip(axis).map(|(a, e)| sh * a + ch * e).collect(),
                )
            }
            Anchor::Tabulated => unreachable!(),
        };
        let point = ModelPoint::new(self.space, point)?;
        let normal = project_tangent(&point, &normal)?;
        Ok(FamilyPointEval {
            point,
            normal,
            lambda,
        })
    }

    /// Chart point whose leaf image lies in the 2-plane spanned by the slice
    /// frame; `v` runs along that slice.
    pub fn slice_chart(&self, v: f64) -> Vec<f64> {
        let d = self.chart_dim();
        if self.kind.is_sphere() {
            let mut c = vec![FRAC_PI_2; d];
            c[d - 1] = v;
            c
        } else {
            let mut c = vec![0.0; d];
            c[0] = v;
            c
        }
    }

    /// Conformal coordinates of the totally geodesic `Q^2` containing the
    /// slice `{slice_chart(v)}` for every `s`.
    pub fn slice_frame(&self) -> Vec<Vec<f64>> {
        let n = self.space.dim();
        if self.kind.is_sphere() {
            vec![self.frame[0].clone(), self.frame[1].clone(), self.frame[2].clone()]
        } else {
            vec![self.frame[0].clone(), self.frame[1].clone(), self.frame[n].clone()]
        }
    }

    /// Stereographic / Poincare chart adapted to the family frame.
    pub fn conformal_chart(&self) -> Result<ConformalChart> {
        if self.frame.is_empty() {
            return Err(Error::Unsupported("tabulated families have no chart".into()));
        }
        ConformalChart::new(self.space, self.frame.clone())
    }
}

fn combine(vectors: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; vectors[0].len()];
    for (v, c) in vectors.iter().zip(coeffs) {
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    out
}
