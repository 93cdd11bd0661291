//! Complete hypersurfaces obtained by gluing reflected copies of a graph.
//!
//! Every piece is the same graph `{(f_s(p), phi(s))}` composed with an affine
//! height map `t -> sigma t + tau`, so reflected samples are exact images of
//! the fundamental ones.

use crate::error::{Error, Result};
use crate::export::{csv_row, round_sig};
use crate::families::FamilyKind;
use crate::profile::{EndpointKind, Profile, VerticalExtent};
use crate::spaceform::inner;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Relative distance of the last regular sample from a singular end.
pub const SEAM_CLAMP: f64 = 1e-9;
/// Relative offset at which the verticality of the seam is probed.
pub const VERTICALITY_PROBE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    BallLike,
    SphereLike,
    AnnulusLike,
    PeriodicPlaneLike,
}

impl Topology {
    pub fn name(&self) -> &'static str {
        match self {
            Topology::BallLike => "ball",
            Topology::SphereLike => "sphere",
            Topology::AnnulusLike => "annulus",
            Topology::PeriodicPlaneLike => "periodic_plane",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl SymmetryClass {
    pub fn name(&self) -> &'static str {
        match self {
            SymmetryClass::Elliptic => "elliptic",
            SymmetryClass::Parabolic => "parabolic",
            SymmetryClass::Hyperbolic => "hyperbolic",
        }
    }
}

/// `t -> sigma t + tau` with `sigma = +-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightMap {
    pub sigma: f64,
    pub tau: f64,
}

impl HeightMap {
    pub const IDENTITY: HeightMap = HeightMap { sigma: 1.0, tau: 0.0 };

    pub fn reflection(plane: f64) -> Self {
        HeightMap {
            sigma: -1.0,
            tau: 2.0 * plane,
        }
    }

    pub fn apply(&self, t: f64) -> f64 {
        self.sigma * t + self.tau
    }
}

/// A copy of the graph over `s_range` placed by a height map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub s_range: (f64, f64),
    pub map: HeightMap,
}

#[derive(Clone, Copy, Debug)]
pub struct AssembleOptions {
    /// Fundamental domains `k_min..=k_max` of periodic assemblies.
    pub periods: (i32, i32),
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { periods: (-2, 2) }
    }
}

#[derive(Clone, Debug)]
pub struct AssembledHypersurface {
    profile: Profile,
    pieces: Vec<Piece>,
    topology: Topology,
    symmetry_class: SymmetryClass,
    symmetry_planes: Vec<f64>,
    /// Height `phi` at the upper end of the fundamental piece, when finite.
    top_height: Option<f64>,
    slab: Option<(f64, f64)>,
    period: Option<f64>,
}

/// One sampled point of an assembled hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub struct AssembledPoint {
    pub piece: usize,
    pub s: f64,
    pub chart: Vec<f64>,
    pub base: Vec<f64>,
    pub t: f64,
    /// On a gluing sphere or leaf where `rho = 1`.
    pub seam: bool,
}

/// Quad mesh of a two-dimensional slice, in conformal coordinates of the
/// slice plane and height.
#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub quads: Vec<[usize; 4]>,
}

pub fn assemble(profile: &Profile, options: AssembleOptions) -> Result<AssembledHypersurface> {
    let kind = profile.family().kind();
    let (s_lo, s_hi) = profile.s_range();
    let s_range = (s_lo, s_hi);
    let closing = profile.endpoint_kind() == EndpointKind::RhoReachesOne;
    let single = |map| Piece { s_range, map };
    let out = match kind {
        FamilyKind::SphereSpherical | FamilyKind::SphereHyperbolic if closing => {
            let t0 = profile.phi(s_hi)?;
            AssembledHypersurface {
                profile: profile.clone(),
                pieces: vec![single(HeightMap::IDENTITY), single(HeightMap::reflection(t0))],
                topology: Topology::SphereLike,
                symmetry_class: SymmetryClass::Elliptic,
                symmetry_planes: vec![t0],
                top_height: Some(t0),
                slab: None,
                period: None,
            }
        }
        FamilyKind::SphereSpherical => AssembledHypersurface {
            profile: profile.clone(),
            pieces: vec![single(HeightMap::IDENTITY)],
            topology: Topology::BallLike,
            symmetry_class: SymmetryClass::Elliptic,
            symmetry_planes: Vec::new(),
            top_height: None,
            slab: None,
            period: None,
        },
        FamilyKind::Horosphere => {
            let sup = match profile.vertical_half_extent()? {
                VerticalExtent::Supremum(v) => v,
                other => {
                    return Err(Error::Degenerate(format!(
                        "horosphere profile has extent {other:?}"
                    )))
                }
            };
            AssembledHypersurface {
                profile: profile.clone(),
                pieces: vec![single(HeightMap::IDENTITY), single(HeightMap::reflection(0.0))],
                topology: Topology::BallLike,
                symmetry_class: SymmetryClass::Parabolic,
                symmetry_planes: vec![0.0],
                top_height: None,
                slab: Some((-sup, sup)),
                period: None,
            }
        }
        FamilyKind::Equidistant if closing => {
            let (k_min, k_max) = options.periods;
            if k_min > k_max {
                return Err(Error::InvalidParameter(format!(
                    "empty period range {k_min}..={k_max}"
                )));
            }
            let a = profile.phi(s_hi)?;
            let pieces = (k_min..=k_max)
                .map(|k| {
                    let map = if k.rem_euclid(2) == 0 {
                        HeightMap {
                            sigma: 1.0,
                            tau: k as f64 * a,
                        }
                    } else {
                        HeightMap::reflection((k + 1) as f64 * a / 2.0)
                    };
                    single(map)
                })
                .collect();
            AssembledHypersurface {
                profile: profile.clone(),
                pieces,
                topology: Topology::PeriodicPlaneLike,
                symmetry_class: SymmetryClass::Hyperbolic,
                symmetry_planes: (k_min..=k_max + 1).map(|k| k as f64 * a).collect(),
                top_height: Some(a),
                slab: None,
                period: Some(2.0 * a),
            }
        }
        _ => {
            return Err(Error::WrongEndpoint {
                found: profile.endpoint_kind().name(),
                expected: EndpointKind::RhoReachesOne.name(),
            })
        }
    };
    Ok(out)
}

impl AssembledHypersurface {
    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Index of the untransformed piece.
    pub fn fundamental_piece(&self) -> usize {
        self.pieces
            .iter()
            .position(|p| p.map == HeightMap::IDENTITY)
            .expect("every assembly contains the graph itself")
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn symmetry_class(&self) -> SymmetryClass {
        self.symmetry_class
    }

    pub fn symmetry_planes(&self) -> &[f64] {
        &self.symmetry_planes
    }

    /// `t0`, the height of the closing sphere or of the far seam leaf.
    pub fn top_height(&self) -> Option<f64> {
        self.top_height
    }

    pub fn slab(&self) -> Option<(f64, f64)> {
        self.slab
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// Closure of the set of heights, `(-inf, inf)` for periodic assemblies
    /// and the truncated one-sided range `[0, inf)` of the unbounded cap.
    pub fn height_range(&self) -> (f64, f64) {
        match (self.topology, self.slab, self.top_height) {
            (Topology::PeriodicPlaneLike, ..) => (f64::NEG_INFINITY, f64::INFINITY),
            (_, Some(slab), _) => slab,
            (_, None, Some(t0)) => {
                let ends = self
                    .pieces
                    .iter()
                    .flat_map(|p| [p.map.apply(0.0), p.map.apply(t0)]);
                ends.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)))
            }
            _ => (0.0, f64::INFINITY),
        }
    }

    /// Difference between the largest and smallest height; only defined for
    /// closed assemblies.
    pub fn vertical_diameter(&self) -> Option<f64> {
        if self.topology != Topology::SphereLike {
            return None;
        }
        let (lo, hi) = self.height_range();
        Some(hi - lo)
    }

    /// Rows of `s` used for sampling, with seam flags. The rows cluster
    /// towards singular ends, the last regular row sits `SEAM_CLAMP * range`
    /// inside each singular end and the seam itself is an extra exact row.
    pub fn s_rows(&self, ns: usize) -> Result<Vec<(f64, bool)>> {
        if ns < 2 {
            return Err(Error::InvalidParameter("need at least 2 rows in s".into()));
        }
        let (lo, hi) = self.profile.s_range();
        let range = hi - lo;
        let upper = self.profile.endpoint_kind() == EndpointKind::RhoReachesOne;
        let lower = self.profile.lower_singular();
        let warp = |x: f64| match (lower, upper) {
            (true, true) => 0.5 * (1.0 - (PI * x).cos()),
            (false, true) => 1.0 - (1.0 - x) * (1.0 - x),
            (true, false) => x * x,
            (false, false) => x,
        };
        let mut rows = Vec::with_capacity(ns + 2);
        if lower {
            rows.push((lo, true));
        }
        for k in 0..ns {
            let x = k as f64 / (ns - 1) as f64;
            let s = if k == 0 {
                if lower { lo + SEAM_CLAMP * range } else { lo }
            } else if k == ns - 1 {
                hi - SEAM_CLAMP * range
            } else {
                lo + range * warp(x)
            };
            rows.push((s, false));
        }
        if upper {
            rows.push((hi, true));
        }
        Ok(rows)
    }

    fn row_heights(&self, rows: &[(f64, bool)]) -> Result<Vec<f64>> {
        rows.par_iter().map(|(s, _)| self.profile.phi(*s)).collect()
    }

    /// All pieces sampled on `rows x charts`; points are ordered by piece,
    /// then row, then chart.
    pub fn sample(&self, ns: usize, charts: &[Vec<f64>]) -> Result<Vec<AssembledPoint>> {
        let family = self.profile.family();
        let rows = self.s_rows(ns)?;
        let heights = self.row_heights(&rows)?;
        let fundamental: Vec<(usize, f64, &Vec<f64>, Vec<f64>)> = rows
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, (s, _))| charts.iter().map(move |c| (i, *s, c)))
            .map(|(i, s, c)| Ok((i, s, c, family.eval_family(s, c)?.point.into_coords())))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(fundamental.len() * self.pieces.len());
        for (k, piece) in self.pieces.iter().enumerate() {
            for (i, s, chart, base) in &fundamental {
                out.push(AssembledPoint {
                    piece: k,
                    s: *s,
                    chart: (*chart).clone(),
                    base: base.clone(),
                    t: piece.map.apply(heights[*i]),
                    seam: rows[*i].1,
                });
            }
        }
        Ok(out)
    }

    /// Chart values along the slice used by meshes: the azimuth over a full
    /// turn for spheres, `[-L, L]` otherwise.
    pub fn slice_values(&self, nv: usize) -> Result<Vec<f64>> {
        if nv < 2 {
            return Err(Error::InvalidParameter("need at least 2 slice samples".into()));
        }
        let family = self.profile.family();
        Ok(if family.kind().is_sphere() {
            (0..nv).map(|j| 2.0 * PI * j as f64 / nv as f64).collect()
        } else {
            let l = family.chart_half_width();
            (0..nv).map(|j| -l + 2.0 * l * j as f64 / (nv - 1) as f64).collect()
        })
    }

    /// Quad mesh of the slice through the 2-plane of the slice frame, in
    /// conformal coordinates `(y_1, y_2, t)`.
    pub fn slice_mesh(&self, ns: usize, nv: usize) -> Result<Mesh> {
        let family = self.profile.family();
        let frame = family.slice_frame();
        let eps = family.space().epsilon();
        let values = self.slice_values(nv)?;
        let charts: Vec<Vec<f64>> = values.iter().map(|v| family.slice_chart(*v)).collect();
        let points = self.sample(ns, &charts)?;
        let rows = points.len() / (self.pieces.len() * nv);
        let wrap = family.kind().is_sphere();
        let mut mesh = Mesh::default();
        for p in &points {
            let d = 1.0 + eps as f64 * inner(eps, &p.base, &frame[0]);
            mesh.vertices.push([
                inner(eps, &p.base, &frame[1]) / d,
                inner(eps, &p.base, &frame[2]) / d,
                p.t,
            ]);
        }
        let cols = if wrap { nv } else { nv - 1 };
        for k in 0..self.pieces.len() {
            let start = k * rows * nv;
            for i in 0..rows - 1 {
                for j in 0..cols {
                    let j1 = (j + 1) % nv;
                    let at = |r: usize, c: usize| start + r * nv + c;
                    mesh.quads.push([at(i, j), at(i + 1, j), at(i + 1, j1), at(i, j1)]);
                }
            }
        }
        Ok(mesh)
    }

    pub fn metadata(&self) -> Metadata {
        let family = self.profile.family();
        let space = family.space();
        Metadata {
            family: family.kind().name(),
            space: if space.is_spherical() { "s" } else { "h" },
            dim: space.dim(),
            c: round_sig(self.profile.c()),
            topology: self.topology.name(),
            symmetry_class: self.symmetry_class.name(),
            symmetry_planes: self.symmetry_planes.iter().map(|t| round_sig(*t)).collect(),
            pieces: self.pieces.len(),
            vertical_diameter: self.vertical_diameter().map(round_sig),
            slab: self.slab.map(|(lo, hi)| [round_sig(lo), round_sig(hi)]),
            period: self.period.map(round_sig),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub family: &'static str,
    pub space: &'static str,
    pub dim: usize,
    pub c: f64,
    pub topology: &'static str,
    pub symmetry_class: &'static str,
    pub symmetry_planes: Vec<f64>,
    pub pieces: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertical_diameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slab: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
}

impl Metadata {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}

/// Angle function just inside every singular end of the profile. It tends to
/// zero there, so the glued tangent spaces are vertical.
pub fn boundary_verticality_check(profile: &Profile) -> Result<f64> {
    let (lo, hi) = profile.s_range();
    let probe = VERTICALITY_PROBE * (hi - lo);
    let mut ends = Vec::new();
    if profile.endpoint_kind() == EndpointKind::RhoReachesOne {
        ends.push(hi - probe);
    }
    if profile.lower_singular() {
        ends.push(lo + probe);
    }
    if ends.is_empty() {
        return Err(Error::WrongEndpoint {
            found: profile.endpoint_kind().name(),
            expected: EndpointKind::RhoReachesOne.name(),
        });
    }
    ends.into_iter()
        .map(|s| profile.theta(s))
        .try_fold(0.0f64, |m, th| Ok(m.max(th?)))
}

pub fn write_obj<W: Write>(mesh: &Mesh, mut out: W) -> Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", fmt(v[0]), fmt(v[1]), fmt(v[2]))?;
    }
    for q in &mesh.quads {
        writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)?;
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    crate::export::fmt_num(v)
}

/// CSV with columns `piece, s, chart_1.., x_0.., t, seam`.
pub fn write_points_csv<W: Write>(points: &[AssembledPoint], mut out: W) -> Result<()> {
    let Some(first) = points.first() else {
        return Ok(());
    };
    let mut header = vec!["piece".to_string(), "s".to_string()];
    header.extend((1..=first.chart.len()).map(|i| format!("chart_{i}")));
    header.extend((0..first.base.len()).map(|i| format!("x_{i}")));
    header.extend(["t", "seam"].map(String::from));
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let mut row = vec![p.s];
        row.extend_from_slice(&p.chart);
        row.extend_from_slice(&p.base);
        row.push(p.t);
        writeln!(out, "{},{},{}", p.piece, csv_row(&row), p.seam as u8)?;
    }
    Ok(())
}

/// Tensor grid of leaf charts with `nc` values per coordinate: polar angles
/// over `[0, pi]` and the azimuth over a full turn for spheres, `[-L, L]`
/// for flat leaves.
pub fn chart_grid(profile: &Profile, nc: usize) -> Result<Vec<Vec<f64>>> {
    if nc < 2 {
        return Err(Error::InvalidParameter("need at least 2 chart samples".into()));
    }
    let family = profile.family();
    let d = family.chart_dim();
    let axis = |i: usize| -> Vec<f64> {
        if family.kind().is_sphere() {
            if i + 1 == d {
                (0..nc).map(|j| 2.0 * PI * j as f64 / nc as f64).collect()
            } else {
                (0..nc).map(|j| PI * j as f64 / (nc - 1) as f64).collect()
            }
        } else {
            let l = family.chart_half_width();
            (0..nc).map(|j| -l + 2.0 * l * j as f64 / (nc - 1) as f64).collect()
        }
    };
    let mut grid = vec![Vec::new()];
    for i in 0..d {
        let values = axis(i);
        grid = grid
            .into_iter()
            .flat_map(|g: Vec<f64>| {
                values.iter().map(move |v| {
                    let mut g = g.clone();
                    g.push(*v);
                    g
                })
            })
            .collect();
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::profile::ProfileOptions;
    use crate::spaceform::SpaceFormId;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn build(family: FamilySpec, c: f64) -> AssembledHypersurface {
        let p = Profile::new(family, c, ProfileOptions::default()).unwrap();
        assemble(&p, AssembleOptions::default()).unwrap()
    }

    #[test]
    fn sphere_closes_up() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = build(FamilySpec::sphere(s2).unwrap(), 2.0);
        assert_eq!(h.topology(), Topology::SphereLike);
        assert_eq!(h.pieces().len(), 2);
        let expected = 2.0 * (2.0 / 3f64.sqrt()).acosh();
        assert_abs_diff_eq!(h.vertical_diameter().unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(h.symmetry_planes()[0], expected / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_constant_gives_one_unbounded_piece() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = build(FamilySpec::sphere(s2).unwrap(), 1.0);
        assert_eq!(h.topology(), Topology::BallLike);
        assert_eq!(h.pieces().len(), 1);
        assert!(h.vertical_diameter().is_none());
    }

    #[test]
    fn horosphere_lies_in_slab() {
        let h2 = SpaceFormId::hyperbolic(2).unwrap();
        let h = build(FamilySpec::horosphere(h2).unwrap(), 1.0);
        assert_eq!(h.symmetry_class(), SymmetryClass::Parabolic);
        let (lo, hi) = h.slab().unwrap();
        assert_abs_diff_eq!(hi, FRAC_PI_2, epsilon = 1e-12);
        assert_eq!(lo, -hi);
        let charts = chart_grid(h.profile(), 5).unwrap();
        let pts = h.sample(60, &charts).unwrap();
        assert!(pts.iter().all(|p| p.t.abs() < FRAC_PI_2));
        // the seam row is the base horosphere at height 0 in both pieces
        assert!(pts.iter().filter(|p| p.seam).all(|p| p.t == 0.0));
    }

    #[test]
    fn equidistant_pieces_tile_the_line() {
        let h2 = SpaceFormId::hyperbolic(2).unwrap();
        let h = build(FamilySpec::equidistant(h2).unwrap(), 0.5);
        let a = h.top_height().unwrap();
        assert_eq!(h.pieces().len(), 5);
        assert_abs_diff_eq!(h.period().unwrap(), 2.0 * a);
        for (k, piece) in (-2..=2).zip(h.pieces()) {
            let ends = [piece.map.apply(0.0), piece.map.apply(a)];
            let (lo, hi) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
            assert_abs_diff_eq!(lo, k as f64 * a, epsilon = 1e-12);
            assert_abs_diff_eq!(hi, (k + 1) as f64 * a, epsilon = 1e-12);
        }
    }

    #[test]
    fn verticality_at_seams() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h2 = SpaceFormId::hyperbolic(2).unwrap();
        for (f, c) in [
            (FamilySpec::sphere(s2).unwrap(), 2.0),
            (FamilySpec::equidistant(h2).unwrap(), 0.5),
            (FamilySpec::horosphere(h2).unwrap(), 1.0),
        ] {
            let p = Profile::new(f, c, ProfileOptions::default()).unwrap();
            assert!(boundary_verticality_check(&p).unwrap() <= 1e-2);
        }
        let p = Profile::new(FamilySpec::sphere(s2).unwrap(), 1.0, ProfileOptions::default()).unwrap();
        assert!(matches!(boundary_verticality_check(&p), Err(Error::WrongEndpoint { .. })));
    }

    #[test]
    fn mesh_counts() {
        let s2 = SpaceFormId::sphere(2).unwrap();
        let h = build(FamilySpec::sphere(s2).unwrap(), 2.0);
        let mesh = h.slice_mesh(10, 12).unwrap();
        // 10 regular rows plus the seam row, two pieces
        assert_eq!(mesh.vertices.len(), 2 * 11 * 12);
        assert_eq!(mesh.quads.len(), 2 * 10 * 12);
        let mut buf = Vec::new();
        write_obj(&mesh, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 240);
    }

    #[test]
    fn metadata_json_fields() {
        let h2 = SpaceFormId::hyperbolic(3).unwrap();
        let json = build(FamilySpec::horosphere(h2).unwrap(), 1.0).metadata().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["topology"], "ball");
        assert_eq!(v["symmetry_class"], "parabolic");
        assert!(v.get("vertical_diameter").is_none());
        assert_abs_diff_eq!(v["slab"][1].as_f64().unwrap(), FRAC_PI_2, epsilon = 1e-14);
    }
}
