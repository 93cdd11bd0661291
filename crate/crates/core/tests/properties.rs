use proptest::prelude::*;
use umbilic::assemble::{assemble, chart_grid, AssembleOptions, HeightMap};
use umbilic::families::FamilySpec;
use umbilic::profile::{Profile, ProfileOptions};
use umbilic::spaceform::SpaceFormId;
use umbilic::warp::{map_to_product, pull_back, WarpSpec, EXP_NEG_OFFSET};

fn family(kind: u8, dim: usize) -> FamilySpec {
    let s = SpaceFormId::sphere(dim).unwrap();
    let h = SpaceFormId::hyperbolic(dim).unwrap();
    match kind {
        0 => FamilySpec::sphere(s).unwrap(),
        1 => FamilySpec::sphere(h).unwrap(),
        2 => FamilySpec::horosphere(h).unwrap(),
        _ => FamilySpec::equidistant(h).unwrap(),
    }
}

/// Admissible `c` for each kind: equidistants need `0 < c < 1`.
fn kind_and_c() -> impl Strategy<Value = (u8, f64)> {
    (0u8..4).prop_flat_map(|k| {
        let c = if k == 3 { 0.05f64..0.95 } else { 0.2f64..3.0 };
        (Just(k), c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn profile_is_admissible((kind, c) in kind_and_c(), frac in 0.0f64..1.0) {
        let p = Profile::new(family(kind, 2), c, ProfileOptions::default()).unwrap();
        let (lo, hi) = p.s_range();
        let s = lo + (hi - lo) * (0.001 + 0.998 * frac);
        let rho = p.rho(s).unwrap();
        prop_assert!(rho > 0.0 && rho <= 1.0);
        let theta = p.theta(s).unwrap();
        prop_assert!((theta * theta + rho * rho - 1.0).abs() < 1e-12);
        prop_assert!(p.phi(s).unwrap() >= 0.0);
    }

    #[test]
    fn phi_is_monotone((kind, c) in kind_and_c(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let p = Profile::new(family(kind, 2), c, ProfileOptions::default()).unwrap();
        let (lo, hi) = p.s_range();
        let (a, b) = (a.min(b), a.max(b));
        let at = |f: f64| p.phi(lo + (hi - lo) * (0.001 + 0.998 * f)).unwrap();
        prop_assert!(at(a) <= at(b) + 1e-14);
    }

    #[test]
    fn reflection_is_an_involution(plane in -5.0f64..5.0, t in -10.0f64..10.0) {
        let m = HeightMap::reflection(plane);
        prop_assert!((m.apply(m.apply(t)) - t).abs() < 1e-12);
        prop_assert!((m.apply(plane) - plane).abs() < 1e-12);
    }

    #[test]
    fn warped_round_trip((kind, c) in kind_and_c(), which in 0u8..4, delta in 0.3f64..2.0) {
        let p = Profile::new(family(kind, 2), c, ProfileOptions::default()).unwrap();
        let h = assemble(&p, AssembleOptions { periods: (-1, 1) }).unwrap();
        let spec = match which {
            0 => WarpSpec::identity(),
            1 => WarpSpec::exp_neg(EXP_NEG_OFFSET).unwrap(),
            2 => WarpSpec::constant_with_delta(1.5, delta).unwrap(),
            _ => WarpSpec::cosh(),
        };
        let samples = h.sample(6, &chart_grid(h.profile(), 3).unwrap()).unwrap();
        if let Ok(set) = pull_back(&spec, &h, &samples) {
            let (il, ih) = spec.interval();
            prop_assert!(set.points.iter().all(|q| q.t > il && q.t < ih));
            let back = map_to_product(&spec, &set).unwrap();
            for (q, r) in back.iter().zip(&set.points) {
                let original = samples.iter().find(|x| x.piece == r.piece && x.s == r.s && x.chart == r.chart).unwrap();
                prop_assert!((q.t - original.t).abs() <= 1e-10 * original.t.abs().max(1.0));
            }
        }
    }
}
