//! Extremum and sharpness scans checked against naive nested loops.

use monoscheme_core::metrics::{count_extrema_3d, find_extrema_3d, max_step_change, sharpness_metrics};
use monoscheme_core::{Error, Field3D, Mesh3D, Region3D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Brute {
    extrema: Vec<(usize, usize, usize)>,
    a: f64,
    b: f64,
}

fn brute(vals: &[f64], n: usize) -> Brute {
    let at = |i: usize, j: usize, k: usize| vals[i + n * j + n * n * k];
    let mut out = Brute { extrema: Vec::new(), a: 0.0, b: 0.0 };
    if n < 3 {
        return out;
    }
    for k in 1..n - 1 {
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let c = at(i, j, k);
                let nb = [at(i + 1, j, k), at(i - 1, j, k), at(i, j + 1, k), at(i, j - 1, k), at(i, j, k + 1), at(i, j, k - 1)];
                let mut greater = true;
                let mut smaller = true;
                for &x in &nb {
                    greater &= c > x;
                    smaller &= c < x;
                }
                if greater || smaller {
                    out.extrema.push((i, j, k));
                    let mut hi = 0.0f64;
                    let mut lo = f64::INFINITY;
                    for &x in &nb {
                        hi = hi.max((c - x).abs());
                        lo = lo.min((c - x).abs());
                    }
                    out.a = out.a.max(hi);
                    out.b = out.b.max(lo);
                }
            }
        }
    }
    out
}

fn random_field(rng: &mut ChaCha8Rng) -> (Field3D, usize) {
    let n = rng.gen_range(2..=5);
    let mesh = Mesh3D::new(1.0, n).unwrap();
    // Half the fields draw from a few integers so ties are common.
    let coarse = rng.gen_bool(0.5);
    let vals = (0..mesh.cell_count())
        .map(|_| if coarse { f64::from(rng.gen_range(0..4)) } else { rng.gen_range(-1.0..1.0) })
        .collect();
    (Field3D::from_values(mesh, vals).unwrap(), n)
}

#[test]
fn extrema_and_sharpness_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let (u, n) = random_field(&mut rng);
        let region = Region3D::interior(u.mesh());
        let expect = brute(u.values(), n);
        let found = find_extrema_3d(&u, &region);
        assert_eq!(count_extrema_3d(&u, &region), expect.extrema.len());
        let cells: Vec<_> = found.iter().map(|&f| u.mesh().unflat(f)).collect();
        assert_eq!(cells, expect.extrema);
        match sharpness_metrics(&u, &found) {
            Ok(s) => {
                assert_eq!(s.a, expect.a);
                assert_eq!(s.b, expect.b);
            }
            Err(Error::EmptySet) => assert!(expect.extrema.is_empty()),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}

#[test]
fn step_change_lipschitz_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let len = rng.gen_range(2..50);
        let u: Vec<f64> = (0..len).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let w: Vec<f64> = u.iter().map(|x| x + rng.gen_range(-0.5..0.5)).collect();
        let lhs = (max_step_change(&u) - max_step_change(&w)).abs();
        assert!(lhs <= 2.0 * monoscheme_core::dist_c(&u, &w) + 1e-12);
    }
}

#[test]
fn subregion_counts_never_exceed_interior() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let (u, _) = random_field(&mut rng);
        let all = count_extrema_3d(&u, &Region3D::interior(u.mesh()));
        assert!(count_extrema_3d(&u, &Region3D::cube(2, 3)) <= all);
    }
}
