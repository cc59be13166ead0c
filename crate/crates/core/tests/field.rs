mod common;

use common::{max_abs_diff, naive_field, oracle_for, random_scenario};
use isobenefit_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ∫∫ over [-1/2, 1/2]² of 1/(u² + v² + 1), evaluated once with mpmath at 30 digits.
const UNIT_SQUARE_REFERENCE: f64 = 0.863_988_550_685_461_8;

fn unit_square_scenario() -> Scenario {
    let grid = Grid::new(-0.5, 0.5, -0.5, 0.5, 1, 1).unwrap();
    Scenario::new("unit", grid, MobilityConfig::rational(1.0).with_distance_mode(DistanceMode::Squared))
        .with_amenities([Amenity::new("a", 0.0, 0.0, 1.0)])
}

fn midpoint_oracle(n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut total = 0.0;
    for j in 0..n {
        let v = -0.5 + (j as f64 + 0.5) * h;
        for i in 0..n {
            let u = -0.5 + (i as f64 + 0.5) * h;
            total += 1.0 / (u * u + v * v + 1.0);
        }
    }
    total * h * h
}

#[test]
fn benefit_at_matches_term_by_term_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid = Grid::new(0.0, 10.0, 0.0, 10.0, 10, 10).unwrap();
    for _ in 0..50 {
        let e = rng.gen_range(0.1..5.0);
        let ams: Vec<_> = (0..5)
            .map(|i| Amenity::new(format!("{i}"), rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
            .collect();
        let s = Scenario::new("r", grid, MobilityConfig::rational(e)).with_amenities(ams.clone());
        let k = Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
        let mut expected = 0.0;
        for a in &ams {
            let d = ((a.position.x - k.x).powi(2) + (a.position.y - k.y).powi(2)).sqrt();
            expected += a.punctual_benefit * e / (d + e);
        }
        assert!((benefit_at(&s, k).unwrap() - expected).abs() <= 1e-12);
    }
}

#[test]
fn squared_mode_field_matches_double_loop() {
    let grid = Grid::new(0.0, 8.0, 0.0, 8.0, 8, 8).unwrap();
    let ams = [(1.3, 2.2, 5.0), (6.1, 6.9, 3.0), (4.0, 0.4, 7.5)];
    let s = Scenario::new("sq", grid, MobilityConfig::rational(0.5).with_distance_mode(DistanceMode::Squared))
        .with_amenities(ams.iter().enumerate().map(|(i, &(x, y, a))| Amenity::new(format!("{i}"), x, y, a)).collect::<Vec<_>>());
    let oracle = naive_field((0.0, 8.0, 0.0, 8.0), 8, 8, &ams, Kernel::Rational, DistanceMode::Squared, 0.5);
    assert!(max_abs_diff(&compute_field(&s).unwrap(), &oracle) <= 1e-12);
}

#[test]
fn weighted_field_is_elementwise_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rows: Vec<Vec<f64>> = (0..6).map(|_| (0..6).map(|_| rng.gen_range(0.0..9.0)).collect()).collect();
    let dens: Vec<Vec<f64>> = (0..6).map(|_| (0..6).map(|_| rng.gen_range(0.0..100.0)).collect()).collect();
    let f = BenefitField::from_rows(&rows).unwrap();
    let w = weighted_field(&f, &Raster::from_rows(&dens).unwrap()).unwrap();
    for r in 0..6 {
        for c in 0..6 {
            assert_eq!(w.get(r, c), rows[r][c] * dens[r][c]);
        }
    }
}

#[test]
fn discrete_total_matches_amenity_major_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let s = random_scenario(&mut rng, 24, 12);
        let oracle = oracle_for(&s);
        // sum over amenities first, then cells
        let g = &s.grid;
        let e = s.mobility.efficiency.uniform().unwrap();
        let mut amenity_major = 0.0;
        for a in &s.amenities {
            let single = naive_field(
                (g.x_min(), g.x_max(), g.y_min(), g.y_max()),
                g.nx(),
                g.ny(),
                &[(a.position.x, a.position.y, a.punctual_benefit)],
                s.mobility.kernel,
                s.mobility.distance_mode,
                e,
            );
            amenity_major += single.iter().flatten().sum::<f64>();
        }
        let total = total_benefit_discrete(&compute_field(&s).unwrap());
        let cell_major: f64 = oracle.iter().flatten().sum();
        let scale = total.abs().max(1e-300);
        assert!((total - amenity_major).abs() / scale <= 1e-12, "{total} vs {amenity_major}");
        assert!((total - cell_major).abs() / scale <= 1e-12);
    }
}

#[test]
fn quadrature_matches_fine_midpoint_rule() {
    let mid = midpoint_oracle(2000);
    assert!((mid - UNIT_SQUARE_REFERENCE).abs() / UNIT_SQUARE_REFERENCE < 1e-7);
    let s = unit_square_scenario();
    for res in [64, 128, 256] {
        let q = total_benefit_integral(&s, res).unwrap();
        assert!((q - mid).abs() / mid <= 1e-6, "resolution {res}: {q} vs {mid}");
    }
}

#[test]
fn quadrature_converges_at_fourth_order() {
    let s = unit_square_scenario();
    let i32_ = total_benefit_integral(&s, 32).unwrap();
    let i64_ = total_benefit_integral(&s, 64).unwrap();
    let i128_ = total_benefit_integral(&s, 128).unwrap();
    let order = ((i32_ - i64_).abs() / (i64_ - i128_).abs()).log2();
    assert!(order >= 3.0, "observed order {order}");
}

#[test]
fn cell_sum_converges_to_integral() {
    let mut s = unit_square_scenario();
    let q = total_benefit_integral(&s, 128).unwrap();
    s.grid = Grid::new(-0.5, 0.5, -0.5, 0.5, 512, 512).unwrap();
    let f = compute_field(&s).unwrap();
    let discrete = total_benefit_discrete(&f) * s.grid.cell_area();
    assert!((discrete - q).abs() / q <= 1e-3, "{discrete} vs {q}");
}

#[test]
fn integral_over_off_centre_rectangle_matches_reference() {
    // several amenities, including one outside the city
    let grid = Grid::new(0.0, 3.0, 0.0, 2.0, 1, 1).unwrap();
    let s = Scenario::new("q", grid, MobilityConfig::rational(0.7).with_distance_mode(DistanceMode::Squared))
        .with_amenities([Amenity::new("a", 1.0, 1.5, 2.0), Amenity::new("b", 4.0, -1.0, 3.0)]);
    let n = 1500;
    let (hx, hy) = (3.0 / n as f64, 2.0 / n as f64);
    let mut mid = 0.0;
    for j in 0..n {
        for i in 0..n {
            let (x, y) = ((i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy);
            mid += 2.0 * 0.7 / ((x - 1.0).powi(2) + (y - 1.5).powi(2) + 0.7)
                + 3.0 * 0.7 / ((x - 4.0).powi(2) + (y + 1.0).powi(2) + 0.7);
        }
    }
    mid *= hx * hy;
    let q = total_benefit_integral(&s, 128).unwrap();
    assert!((q - mid).abs() / mid < 1e-6, "{q} vs {mid}");
}

fn kernel_strategy() -> impl Strategy<Value = (Kernel, DistanceMode)> {
    prop_oneof![
        Just((Kernel::Rational, DistanceMode::Euclidean)),
        Just((Kernel::Rational, DistanceMode::Squared)),
        Just((Kernel::Exponential, DistanceMode::Euclidean)),
    ]
}

fn mobility(k: (Kernel, DistanceMode), e: f64) -> MobilityConfig {
    MobilityConfig {
        kernel: k.0,
        efficiency: EfficiencyModel::Uniform(e),
        distance_mode: k.1,
    }
}

fn amenities_strategy(max: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.0..12.0f64, 0.0..9.0f64, 0.0..10.0f64), 0..max)
}

fn to_amenities(v: &[(f64, f64, f64)], prefix: &str) -> Vec<Amenity> {
    v.iter()
        .enumerate()
        .map(|(i, &(x, y, a))| Amenity::new(format!("{prefix}{i}"), x, y, a))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_return_a_at_zero_distance(a in -1e6..1e6f64, e in 1e-6..1e6f64) {
        prop_assert_eq!(kernel_rational(a, e, 0.0).unwrap(), a);
        prop_assert_eq!(kernel_exponential(a, e, 0.0).unwrap(), a);
    }

    #[test]
    fn rational_magnitude_decreases(a in 0.1..100.0f64, e in 0.01..50.0f64, d in 0.0..100.0f64, step in 0.01..10.0f64) {
        prop_assert!(kernel_rational(a, e, d + step).unwrap() < kernel_rational(a, e, d).unwrap());
    }

    #[test]
    fn field_matches_oracle(
        ams in amenities_strategy(8),
        k in kernel_strategy(),
        e in 0.05..5.0f64,
        nx in 1usize..20,
        ny in 1usize..20,
    ) {
        let grid = Grid::new(0.0, 12.0, 0.0, 9.0, nx, ny).unwrap();
        let s = Scenario::new("p", grid, mobility(k, e)).with_amenities(to_amenities(&ams, "a"));
        let oracle = naive_field((0.0, 12.0, 0.0, 9.0), nx, ny, &ams, k.0, k.1, e);
        prop_assert!(max_abs_diff(&compute_field(&s).unwrap(), &oracle) <= 1e-12);
    }

    #[test]
    fn superposition(
        left in amenities_strategy(5),
        right in amenities_strategy(5),
        k in kernel_strategy(),
        e in 0.05..5.0f64,
    ) {
        let grid = Grid::new(0.0, 12.0, 0.0, 9.0, 12, 9).unwrap();
        let a = Scenario::new("l", grid, mobility(k, e)).with_amenities(to_amenities(&left, "l"));
        let b = Scenario::new("r", grid, mobility(k, e)).with_amenities(to_amenities(&right, "r"));
        let mut both = a.clone();
        both.amenities.extend(b.amenities.clone());
        let (fa, fb, fab) = (compute_field(&a).unwrap(), compute_field(&b).unwrap(), compute_field(&both).unwrap());
        for (i, &v) in fab.values().as_slice().iter().enumerate() {
            let sum = fa.values().as_slice()[i] + fb.values().as_slice()[i];
            prop_assert!((v - sum).abs() <= 1e-12);
        }
    }

    #[test]
    fn translation_invariance(
        ams in amenities_strategy(6),
        k in kernel_strategy(),
        e in 0.05..5.0f64,
        dx in -20.0..20.0f64,
        dy in -20.0..20.0f64,
    ) {
        let grid = Grid::new(0.0, 12.0, 0.0, 9.0, 12, 9).unwrap();
        let s = Scenario::new("t", grid, mobility(k, e)).with_amenities(to_amenities(&ams, "a"));
        let mut moved = s.clone();
        moved.grid = grid.translated(dx, dy).unwrap();
        for a in &mut moved.amenities {
            a.position = Point::new(a.position.x + dx, a.position.y + dy);
        }
        let (f, g) = (compute_field(&s).unwrap(), compute_field(&moved).unwrap());
        for (x, y) in f.values().as_slice().iter().zip(g.values().as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12, "{} vs {}", x, y);
        }
    }

    #[test]
    fn mirror_symmetry(
        half in prop::collection::vec((0.0..6.0f64, 0.0..9.0f64, 0.0..10.0f64), 0..5),
        k in kernel_strategy(),
        e in 0.05..5.0f64,
    ) {
        // mirrored about x = 6
        let grid = Grid::new(0.0, 12.0, 0.0, 9.0, 12, 9).unwrap();
        let mut ams = to_amenities(&half, "l");
        ams.extend(half.iter().enumerate().map(|(i, &(x, y, a))| Amenity::new(format!("r{i}"), 12.0 - x, y, a)));
        let f = compute_field(&Scenario::new("m", grid, mobility(k, e)).with_amenities(ams)).unwrap();
        for r in 0..9 {
            for c in 0..6 {
                prop_assert!((f.get(r, c) - f.get(r, 11 - c)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn linear_in_punctual_benefit(
        ams in amenities_strategy(6),
        k in kernel_strategy(),
        e in 0.05..5.0f64,
        scale in 0.01..100.0f64,
    ) {
        let grid = Grid::new(0.0, 12.0, 0.0, 9.0, 12, 9).unwrap();
        let s = Scenario::new("s", grid, mobility(k, e)).with_amenities(to_amenities(&ams, "a"));
        let mut scaled = s.clone();
        for a in &mut scaled.amenities {
            a.punctual_benefit *= scale;
        }
        let (f, g) = (compute_field(&s).unwrap(), compute_field(&scaled).unwrap());
        for (x, y) in f.values().as_slice().iter().zip(g.values().as_slice()) {
            prop_assert!((x * scale - y).abs() <= 1e-12 * (x * scale).abs().max(1.0));
        }
    }

    #[test]
    fn single_amenity_peak_and_decay(
        x in 0.0..12.0f64,
        y in 0.0..9.0f64,
        a in 0.1..10.0f64,
        k in kernel_strategy(),
        e in 0.05..5.0f64,
    ) {
        let grid = Grid::new(0.0, 12.0, 0.0, 9.0, 12, 9).unwrap();
        let s = Scenario::new("one", grid, mobility(k, e)).with_amenities([Amenity::new("a", x, y, a)]);
        let f = compute_field(&s).unwrap();
        let (best, max) = argmax(&f);
        let (nr, nc) = grid.cell_of(Point::new(x, y)).unwrap();
        // the nearest cell centre is the containing cell; ties allowed
        prop_assert!(f.get(nr, nc) >= max || best == nr * 12 + nc);
        // non-increasing along rows and columns moving away from the nearest cell
        for r in 0..9 {
            for c in nc..11 {
                prop_assert!(f.get(r, c + 1) <= f.get(r, c) + 1e-15);
            }
            for c in 1..=nc {
                prop_assert!(f.get(r, c - 1) <= f.get(r, c) + 1e-15);
            }
        }
        for c in 0..12 {
            for r in nr..8 {
                prop_assert!(f.get(r + 1, c) <= f.get(r, c) + 1e-15);
            }
            for r in 1..=nr {
                prop_assert!(f.get(r - 1, c) <= f.get(r, c) + 1e-15);
            }
        }
    }
}
