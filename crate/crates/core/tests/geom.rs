use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topoffset::geom::{
    orient3d, triangles_intersect, winding_number, DistanceIndex, Point3, Sign, Simplex,
};
use topoffset::mesh::orient_closed;

fn rat(x: f64) -> BigRational {
    BigRational::from_f64(x).unwrap()
}

fn exact_orient(a: Point3, b: Point3, c: Point3, d: Point3) -> Sign {
    let r = |p: Point3| [rat(p.x), rat(p.y), rat(p.z)];
    let (a, b, c, d) = (r(a), r(b), r(c), r(d));
    let u: Vec<_> = (0..3).map(|i| &b[i] - &a[i]).collect();
    let v: Vec<_> = (0..3).map(|i| &c[i] - &a[i]).collect();
    let w: Vec<_> = (0..3).map(|i| &d[i] - &a[i]).collect();
    let det = &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0]);
    if det.is_zero() {
        Sign::Zero
    } else if det.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

fn rand_point(rng: &mut ChaCha8Rng, s: f64) -> Point3 {
    Point3::new(
        rng.gen_range(-s..s),
        rng.gen_range(-s..s),
        rng.gen_range(-s..s),
    )
}

#[test]
fn orient3d_matches_rational_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..4000 {
        let [a, b, c, d] = [0; 4].map(|_| rand_point(&mut rng, 10.0));
        assert_eq!(orient3d(a, b, c, d), exact_orient(a, b, c, d));
    }
}

#[test]
fn orient3d_near_degenerate_matches_rational_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..4000 {
        let a = rand_point(&mut rng, 1.0);
        let b = rand_point(&mut rng, 1.0);
        let c = rand_point(&mut rng, 1.0);
        // A point on the plane through a, b, c, nudged by a few ulps.
        let (s, t) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mut d = a + (b - a) * s + (c - a) * t;
        for _ in 0..(i % 4) {
            d.z = d.z.next_up();
        }
        let e = exact_orient(a, b, c, d);
        assert_eq!(orient3d(a, b, c, d), e, "{a:?} {b:?} {c:?} {d:?}");
    }
    let g = |x: f64, y: f64| Point3::new(x, y, 0.5);
    for i in 0..200 {
        let k = i as f64;
        assert_eq!(
            orient3d(g(0.0, 0.0), g(1.0, k), g(k, 3.0), g(0.1 * k, 0.7)),
            Sign::Zero
        );
    }
}

fn o3(a: [i64; 3], b: [i64; 3], c: [i64; 3], d: [i64; 3]) -> i128 {
    let s = |p: [i64; 3], q: [i64; 3]| [0, 1, 2].map(|i| (p[i] - q[i]) as i128);
    let (u, v, w) = (s(a, d), s(b, d), s(c, d));
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
}

fn o2(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> i128 {
    ((b[0] - a[0]) as i128) * ((c[1] - a[1]) as i128)
        - ((b[1] - a[1]) as i128) * ((c[0] - a[0]) as i128)
}

fn on_seg2(p: [i64; 2], a: [i64; 2], b: [i64; 2]) -> bool {
    o2(a, b, p) == 0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn seg_seg2(p: [i64; 2], q: [i64; 2], a: [i64; 2], b: [i64; 2]) -> bool {
    let (d1, d2) = (o2(a, b, p).signum(), o2(a, b, q).signum());
    let (d3, d4) = (o2(p, q, a).signum(), o2(p, q, b).signum());
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    on_seg2(p, a, b) || on_seg2(q, a, b) || on_seg2(a, p, q) || on_seg2(b, p, q)
}

fn in_tri2(p: [i64; 2], t: [[i64; 2]; 3]) -> bool {
    let s = [o2(t[0], t[1], p), o2(t[1], t[2], p), o2(t[2], t[0], p)];
    s.iter().all(|&x| x >= 0) || s.iter().all(|&x| x <= 0)
}

/// Closed segment against closed non-degenerate triangle, exact on integers.
fn seg_tri(p: [i64; 3], q: [i64; 3], t: [[i64; 3]; 3]) -> bool {
    let (op, oq) = (o3(t[0], t[1], t[2], p), o3(t[0], t[1], t[2], q));
    if op.signum() * oq.signum() > 0 {
        return false;
    }
    if op == 0 && oq == 0 {
        let n = {
            let u = [0, 1, 2].map(|i| (t[1][i] - t[0][i]) as i128);
            let v = [0, 1, 2].map(|i| (t[2][i] - t[0][i]) as i128);
            [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]
        };
        let axis = (0..3).max_by_key(|&i| n[i].abs()).unwrap();
        let pr = |x: [i64; 3]| match axis {
            0 => [x[1], x[2]],
            1 => [x[2], x[0]],
            _ => [x[0], x[1]],
        };
        let t2 = t.map(pr);
        let (p2, q2) = (pr(p), pr(q));
        return in_tri2(p2, t2)
            || in_tri2(q2, t2)
            || (0..3).any(|i| seg_seg2(p2, q2, t2[i], t2[(i + 1) % 3]));
    }
    let s = [
        o3(p, q, t[0], t[1]),
        o3(p, q, t[1], t[2]),
        o3(p, q, t[2], t[0]),
    ];
    s.iter().all(|&x| x >= 0) || s.iter().all(|&x| x <= 0)
}

fn tri_tri(a: [[i64; 3]; 3], b: [[i64; 3]; 3]) -> bool {
    (0..3).any(|i| seg_tri(a[i], a[(i + 1) % 3], b))
        || (0..3).any(|i| seg_tri(b[i], b[(i + 1) % 3], a))
}

fn degenerate(t: [[i64; 3]; 3]) -> bool {
    let u = [0, 1, 2].map(|i| t[1][i] - t[0][i]);
    let v = [0, 1, 2].map(|i| t[2][i] - t[0][i]);
    u[1] * v[2] - u[2] * v[1] == 0
        && u[2] * v[0] - u[0] * v[2] == 0
        && u[0] * v[1] - u[1] * v[0] == 0
}

#[test]
fn triangle_intersection_matches_integer_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut hits, mut coplanar) = (0, 0);
    for i in 0..20000 {
        let r = if i % 2 == 0 { 2 } else { 4 };
        let mut tri = || [0; 3].map(|_| [0; 3].map(|_| rng.gen_range(-r..=r)));
        let (a, b) = (tri(), tri());
        if degenerate(a) || degenerate(b) {
            continue;
        }
        let f = |t: [[i64; 3]; 3]| t.map(|p| Point3::new(p[0] as f64, p[1] as f64, p[2] as f64));
        let expect = tri_tri(a, b);
        hits += usize::from(expect);
        coplanar += usize::from((0..3).all(|k| o3(a[0], a[1], a[2], b[k]) == 0));
        assert_eq!(
            triangles_intersect(&f(a), &f(b)).unwrap(),
            expect,
            "{a:?} {b:?}"
        );
    }
    assert!(hits > 1000 && coplanar > 5, "{hits} {coplanar}");
}

/// Closest point by enumerating the interior critical point and the three edges.
fn oracle_distance(p: Point3, a: Point3, b: Point3, c: Point3) -> f64 {
    let seg = |a: Point3, b: Point3| {
        let d = b - a;
        let t = ((p - a).dot(d) / d.norm_squared()).clamp(0.0, 1.0);
        p.distance(a + d * t)
    };
    let mut best = seg(a, b).min(seg(b, c)).min(seg(c, a));
    let (e0, e1) = (b - a, c - a);
    let (a00, a01, a11) = (e0.dot(e0), e0.dot(e1), e1.dot(e1));
    let (b0, b1) = ((p - a).dot(e0), (p - a).dot(e1));
    let det = a00 * a11 - a01 * a01;
    let s = (a11 * b0 - a01 * b1) / det;
    let t = (a00 * b1 - a01 * b0) / det;
    if s >= 0.0 && t >= 0.0 && s + t <= 1.0 {
        best = best.min(p.distance(a + e0 * s + e1 * t));
    }
    best
}

#[test]
fn complex_distance_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<Point3> = (0..60).map(|_| rand_point(&mut rng, 3.0)).collect();
    let tris: Vec<[u32; 3]> = (0..20).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
    let idx = DistanceIndex::new(
        pts.clone(),
        tris.iter().map(|&t| Simplex::Triangle(t)).collect(),
    )
    .unwrap();
    for _ in 0..2000 {
        let p = rand_point(&mut rng, 5.0);
        let want = tris
            .iter()
            .map(|t| {
                oracle_distance(
                    p,
                    pts[t[0] as usize],
                    pts[t[1] as usize],
                    pts[t[2] as usize],
                )
            })
            .fold(f64::INFINITY, f64::min);
        let got = idx.closest(p);
        assert!(
            (got.distance - want).abs() <= 1e-9 * (1.0 + want),
            "{} vs {want}",
            got.distance
        );
        assert!((got.point.distance(p) - got.distance).abs() < 1e-9);
    }
}

fn octahedron() -> (Vec<Point3>, Vec<[u32; 3]>) {
    let pts = vec![
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(-1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, -1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.0, 0.0, -1.0),
    ];
    let mut faces = Vec::new();
    for (x, sx) in [(0u32, 1.0), (1, -1.0)] {
        for (y, sy) in [(2u32, 1.0), (3, -1.0)] {
            for (z, sz) in [(4u32, 1.0), (5, -1.0)] {
                faces.push(if sx * sy * sz > 0.0 {
                    [x, y, z]
                } else {
                    [x, z, y]
                });
            }
        }
    }
    (pts, faces)
}

#[test]
fn winding_number_matches_l1_ball_membership() {
    let (pts, faces) = octahedron();
    let tris: Vec<[Point3; 3]> = faces.iter().map(|f| f.map(|v| pts[v as usize])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3000 {
        let p = rand_point(&mut rng, 1.5);
        let l1 = p.x.abs() + p.y.abs() + p.z.abs();
        if (l1 - 1.0).abs() < 1e-6 {
            continue;
        }
        let w = winding_number(p, &tris);
        let want = if l1 < 1.0 { 1.0 } else { 0.0 };
        assert!((w - want).abs() < 1e-9, "{p:?}: {w}");
    }
}

#[test]
fn orient_closed_recovers_outward_orientation() {
    let (pts, faces) = octahedron();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let scrambled: Vec<[u32; 3]> = faces
        .iter()
        .map(|&[a, b, c]| {
            if rng.gen_bool(0.5) {
                [a, c, b]
            } else {
                [a, b, c]
            }
        })
        .collect();
    let o = orient_closed(&scrambled, &pts).unwrap();
    let tris: Vec<[Point3; 3]> = o.iter().map(|f| f.map(|v| pts[v as usize])).collect();
    assert!((winding_number(Point3::new(0.1, 0.2, 0.05), &tris) - 1.0).abs() < 1e-9);
    assert!(orient_closed(&scrambled[1..], &pts).is_none());
}
