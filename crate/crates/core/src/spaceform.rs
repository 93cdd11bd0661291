//! Linear models of the space forms `Q^n_eps`.
//!
//! `S^n` is the unit sphere of Euclidean `R^{n+1}`; `H^n` is the upper sheet
//! of the hyperboloid `<x, x>_L = -1` in `R^{n,1}`, with the time coordinate at
//! index 0 and signature `(-, +, ..., +)`.

use crate::error::{Error, Result};
use serde::Serialize;

const POINT_TOLERANCE: f64 = 1e-12;
const TANGENT_TOLERANCE: f64 = 1e-9;
const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpaceFormId {
    epsilon: i8,
    dim: usize,
}

impl SpaceFormId {
    pub fn new(epsilon: i8, dim: usize) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::InvalidParameter(format!(
                "curvature sign must be 1 or -1, got {epsilon}"
            )));
        }
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 2, got {dim}")));
        }
        Ok(SpaceFormId { epsilon, dim })
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        Self::new(1, dim)
    }

    pub fn hyperbolic(dim: usize) -> Result<Self> {
        Self::new(-1, dim)
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn eps(&self) -> f64 {
        self.epsilon as f64
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length `n + 1` of model coordinate vectors.
    pub fn ambient_dim(&self) -> usize {
        self.dim + 1
    }

    pub fn is_spherical(&self) -> bool {
        self.epsilon == 1
    }

    /// Diagonal of the model inner product.
    pub fn signature(&self) -> Vec<f64> {
        let mut s = vec![1.0; self.ambient_dim()];
        if self.epsilon == -1 {
            s[0] = -1.0;
        }
        s
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// Model inner product: Euclidean for `eps = 1`, Lorentzian for `eps = -1`.
pub fn model_inner(space: SpaceFormId, u: &[f64], v: &[f64]) -> Result<f64> {
    space.check_len(u)?;
    space.check_len(v)?;
    Ok(inner(space.epsilon, u, v))
}

pub(crate) fn inner(epsilon: i8, u: &[f64], v: &[f64]) -> f64 {
    let spatial: f64 = u[1..].iter().zip(&v[1..]).map(|(a, b)| a * b).sum();
    spatial + epsilon as f64 * u[0] * v[0]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelPoint {
    coords: Vec<f64>,
    #[serde(skip)]
    space: SpaceFormId,
}

impl ModelPoint {
    /// Normalizes `coords` onto the model quadric. For `H^n` the vector must be
    /// future-pointing timelike.
    pub fn new(space: SpaceFormId, mut coords: Vec<f64>) -> Result<Self> {
        space.check_len(&coords)?;
        let q = inner(space.epsilon, &coords, &coords);
        let scale = if space.is_spherical() {
            if !(q > 0.0) {
                return Err(Error::Degenerate("zero vector is not a point of S^n".into()));
            }
            q.sqrt()
        } else {
            if !(q < 0.0) || coords[0] <= 0.0 {
                return Err(Error::Degenerate(
                    "hyperboloid points must be future-pointing timelike".into(),
                ));
            }
            (-q).sqrt()
        };
        coords.iter_mut().for_each(|c| *c /= scale);
        Ok(ModelPoint { coords, space })
    }

    /// The base point `e_0`.
    pub fn origin(space: SpaceFormId) -> Self {
        let mut coords = vec![0.0; space.ambient_dim()];
        coords[0] = 1.0;
        ModelPoint { coords, space }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn space(&self) -> SpaceFormId {
        self.space
    }

    /// Residual of the quadric equation.
    pub fn constraint_residual(&self) -> f64 {
        (inner(self.space.epsilon, &self.coords, &self.coords) - self.space.eps()).abs()
    }

    pub fn is_valid(&self) -> bool {
        self.constraint_residual() <= POINT_TOLERANCE
            && (self.space.is_spherical() || self.coords[0] >= 1.0 - POINT_TOLERANCE)
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    coords: Vec<f64>,
    base: ModelPoint,
}

impl TangentVector {
    pub fn new(base: &ModelPoint, coords: Vec<f64>) -> Result<Self> {
        base.space.check_len(&coords)?;
        let scale = norm_inf(&coords).max(1.0);
        let dot = inner(base.space.epsilon, &coords, &base.coords);
        if dot.abs() > TANGENT_TOLERANCE * scale {
            return Err(Error::InvalidParameter(format!(
                "vector is not tangent at the base point (<v, x> = {dot:e})"
            )));
        }
        Ok(TangentVector {
            coords,
            base: base.clone(),
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn base(&self) -> &ModelPoint {
        &self.base
    }

    pub fn norm(&self) -> f64 {
        inner(self.base.space.epsilon, &self.coords, &self.coords).max(0.0).sqrt()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Unit-speed geodesic through `p` with initial velocity `v`.
pub fn geodesic(p: &ModelPoint, v: &TangentVector, s: f64) -> Result<ModelPoint> {
    let deviation = (v.norm() - 1.0).abs();
    if deviation > UNIT_TOLERANCE {
        return Err(Error::NotUnit { deviation });
    }
    let (c, sn) = trig(p.space, s);
    let coords = p
        .coords
        .iter()
        .zip(v.coords())
        .map(|(x, y)| c * x + sn * y)
        .collect();
    ModelPoint::new(p.space, coords)
}

/// Velocity of [`geodesic`] at parameter `s`.
pub fn geodesic_velocity(p: &ModelPoint, v: &TangentVector, s: f64) -> Vec<f64> {
    let eps = p.space.eps();
    let (c, sn) = trig(p.space, s);
    p.coords
        .iter()
        .zip(v.coords())
        .map(|(x, y)| -eps * sn * x + c * y)
        .collect()
}

/// `(cos s, sin s)` on the sphere, `(cosh s, sinh s)` on the hyperboloid.
pub(crate) fn trig(space: SpaceFormId, s: f64) -> (f64, f64) {
    if space.is_spherical() {
        (s.cos(), s.sin())
    } else {
        (s.cosh(), s.sinh())
    }
}

/// Orthogonal projection onto `T_p Q^n_eps`.
pub fn project_tangent(p: &ModelPoint, w: &[f64]) -> Result<TangentVector> {
    p.space.check_len(w)?;
    let eps = p.space.eps();
    let k = inner(p.space.epsilon, w, &p.coords);
    // eps = 1: w - <w,p> p ; eps = -1: w + <w,p>_L p
    let coords = w
        .iter()
        .zip(&p.coords)
        .map(|(a, x)| a - eps * k * x)
        .collect();
    Ok(TangentVector {
        coords,
        base: p.clone(),
    })
}

/// Riemannian distance between two points of the same space form.
pub fn distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    if p.space != q.space {
        return Err(Error::InvalidParameter("points live in different space forms".into()));
    }
    let d = inner(p.space.epsilon, &p.coords, &q.coords);
    Ok(if p.space.is_spherical() {
        d.clamp(-1.0, 1.0).acos()
    } else {
        (-d).max(1.0).acosh()
    })
}

/// Orthonormal vectors of `T_p Q^n_eps` that are also orthogonal to each of
/// `exclude` (which must already be tangent at `p`). Built by Gram-Schmidt on
/// the projected coordinate axes, in coordinate order.
pub fn tangent_frame(p: &ModelPoint, exclude: &[Vec<f64>], count: usize) -> Result<Vec<Vec<f64>>> {
    let eps = p.space.epsilon;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for e in exclude {
        let mut v = e.clone();
        for b in &basis {
            let k = inner(eps, &v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
        }
        let n = inner(eps, &v, &v);
        if n <= 1e-20 {
            return Err(Error::Degenerate("excluded directions are dependent".into()));
        }
        let n = n.sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        basis.push(v);
    }
    let fixed = basis.len();
    for axis in 0..p.space.ambient_dim() {
        if basis.len() - fixed == count {
            break;
        }
        let mut e = vec![0.0; p.space.ambient_dim()];
        e[axis] = 1.0;
        let mut v = project_tangent(p, &e)?.coords;
        for _ in 0..2 {
            for b in &basis {
                let k = inner(eps, &v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
            }
        }
        let n = inner(eps, &v, &v);
        if n > 1e-8 {
            let n = n.sqrt();
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    if basis.len() - fixed != count {
        return Err(Error::Degenerate("could not complete tangent frame".into()));
    }
    Ok(basis.split_off(fixed))
}

/// Stereographic (`eps = 1`) or Poincare-ball (`eps = -1`) coordinates
/// centred at `frame[0]` and aligned with the orthonormal tangent vectors
/// `frame[1..]`. The model metric pulls back to `4 / (1 + eps |y|^2)^2 |dy|^2`.
#[derive(Clone, Debug)]
pub struct ConformalChart {
    space: SpaceFormId,
    frame: Vec<Vec<f64>>,
}

impl ConformalChart {
    pub fn new(space: SpaceFormId, frame: Vec<Vec<f64>>) -> Result<Self> {
        if frame.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                got: frame.len(),
            });
        }
        Ok(ConformalChart { space, frame })
    }

    pub fn standard(space: SpaceFormId) -> Self {
        let frame = (0..space.ambient_dim())
            .map(|i| {
                let mut v = vec![0.0; space.ambient_dim()];
                v[i] = 1.0;
                v
            })
            .collect();
        ConformalChart { space, frame }
    }

    pub fn space(&self) -> SpaceFormId {
        self.space
    }

    pub fn to_chart(&self, x: &[f64]) -> Vec<f64> {
        let eps = self.space.epsilon;
        let a = eps as f64 * inner(eps, x, &self.frame[0]);
        let d = 1.0 + a;
        self.frame[1..].iter().map(|v| inner(eps, x, v) / d).collect()
    }

    pub fn from_chart(&self, y: &[f64]) -> Vec<f64> {
        let eps = self.space.eps();
        let r2: f64 = y.iter().map(|c| c * c).sum();
        let d = 1.0 + eps * r2;
        let mut x: Vec<f64> = self.frame[0].iter().map(|o| (1.0 - eps * r2) / d * o).collect();
        for (yi, v) in y.iter().zip(&self.frame[1..]) {
            x.iter_mut().zip(v).for_each(|(xj, vj)| *xj += 2.0 * yi / d * vj);
        }
        x
    }

    /// Factor `sigma(y)` with `g = sigma(y) |dy|^2`.
    pub fn conformal_factor(&self, y: &[f64]) -> f64 {
        let r2: f64 = y.iter().map(|c| c * c).sum();
        let d = 1.0 + self.space.eps() * r2;
        4.0 / (d * d)
    }
}
