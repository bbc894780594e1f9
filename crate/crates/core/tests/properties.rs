use nsfif::ifs::decompose_address;
use nsfif::norms::{lip_seminorm, lip_seminorm_values, sup_norm};
use nsfif::trials;
use nsfif::{FunctionSpec, Grid, Partition};
use proptest::prelude::*;

fn partition() -> impl Strategy<Value = Partition> {
    (2usize..8, -3.0..3.0f64, 0.5..4.0f64, any::<u64>())
        .prop_map(|(n, start, width, seed)| {
            trials::random_partition(&mut trials::trial_rng(seed, 0), n, start, start + width)
        })
}

fn spec() -> impl Strategy<Value = FunctionSpec> {
    any::<u64>().prop_map(|seed| trials::random_germ(&mut trials::trial_rng(seed, 1)))
}

proptest! {
    #[test]
    fn slopes_sum_to_one(p in partition()) {
        let maps = p.affine_maps();
        let sum: f64 = maps.slopes().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(maps.slopes().iter().all(|&a| a > 0.0 && a < 1.0));
    }

    #[test]
    fn maps_round_trip(p in partition(), u in 0.0..1.0f64) {
        let maps = p.affine_maps();
        let x = p.start() + u * p.width();
        for i in 0..p.intervals() {
            prop_assert!((maps.inverse(i, maps.forward(i, x)) - x).abs() <= 1e-12 * p.width().max(1.0));
            let (lo, hi) = p.subinterval(i);
            let z = lo + u * (hi - lo);
            prop_assert!((maps.forward(i, maps.inverse(i, z)) - z).abs() <= 1e-12 * p.width().max(1.0));
        }
    }

    #[test]
    fn knots_map_to_knots(p in partition()) {
        let maps = p.affine_maps();
        let k = p.knots();
        let n = p.intervals();
        for i in 0..n {
            prop_assert_eq!(maps.forward(i, p.start()), k[i]);
            prop_assert_eq!(maps.forward(i, p.end()), k[i + 1]);
            prop_assert_eq!(maps.inverse(i, k[i]), p.start());
            prop_assert_eq!(maps.inverse(i, k[i + 1]), p.end());
        }
    }

    #[test]
    fn address_recomposes(p in partition(), u in 0.0..=1.0f64, depth in 1usize..12) {
        let x = p.start() + u * p.width();
        let chain = decompose_address(x, &p, depth).unwrap();
        prop_assert_eq!(chain.depth(), depth);
        prop_assert!(chain.points.iter().all(|&z| p.contains(z)));
        // Each step expands by 1/a_i, so round-off grows with depth.
        let amp = p.affine_maps().slopes().iter().fold(f64::INFINITY, |m, &a| m.min(a)).powi(-(depth as i32));
        prop_assert!((chain.recompose(&p) - x).abs() <= 1e-12 * p.width().max(1.0) * amp.max(1.0));
    }

    #[test]
    fn knot_chains_settle_on_end_points(p in partition()) {
        let n = p.intervals();
        for &x in p.knots() {
            let chain = decompose_address(x, &p, n).unwrap();
            let settled = chain.points[1..].iter().all(|&z| z == p.start() || z == p.end());
            prop_assert!(settled, "chain from {} went through {:?}", x, chain.points);
        }
    }

    #[test]
    fn refinement_is_monotone(f in spec(), m in 3usize..200, d in prop::sample::select(vec![1.0, 0.75, 0.5])) {
        let coarse = Grid::uniform(0.0, 1.0, m).unwrap();
        let fine = Grid::uniform(0.0, 1.0, 2 * m - 1).unwrap();
        prop_assert!(sup_norm(&f, &coarse).unwrap() <= sup_norm(&f, &fine).unwrap());
        prop_assert!(lip_seminorm(&f, d, &coarse).unwrap() <= lip_seminorm(&f, d, &fine).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn seminorm_triangle(g in spec(), h in spec(), d in prop::sample::select(vec![1.0, 0.6, 0.3])) {
        let grid = Grid::uniform(0.0, 1.0, 257).unwrap();
        let gv: Vec<f64> = grid.points().iter().map(|&x| g.eval(x)).collect();
        let hv: Vec<f64> = grid.points().iter().map(|&x| h.eval(x)).collect();
        let sv: Vec<f64> = gv.iter().zip(&hv).map(|(a, b)| a + b).collect();
        let lg = lip_seminorm_values(grid.points(), &gv, d).unwrap();
        let lh = lip_seminorm_values(grid.points(), &hv, d).unwrap();
        let ls = lip_seminorm_values(grid.points(), &sv, d).unwrap();
        prop_assert!(ls <= (lg + lh) * (1.0 + 1e-12));
    }

    #[test]
    fn evaluation_is_deterministic(f in spec(), x in -2.0..2.0f64) {
        prop_assert_eq!(f.eval(x).to_bits(), f.clone().eval(x).to_bits());
    }
}
