//! Independent reference computations used only by tests.
#![allow(dead_code)]

use fdbt::numkit::{eig, eye, inverse, rmat, CMatrix, C64};
use fdbt::sysmodel::StateSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randn(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

pub fn randn_complex(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Kronecker-vectorized Lyapunov solve of A X + X A* + Q = 0.
pub fn kron_lyapunov(a: &CMatrix, q: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut k = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            // vec index of X[i, j] is j*n + i (column-major)
            let row = j * n + i;
            for l in 0..n {
                k[(row, j * n + l)] += a[(i, l)];
                k[(row, l * n + i)] += a[(j, l)].conj();
            }
        }
    }
    let rhs = CMatrix::from_fn(n * n, 1, |r, _| -q[(r % n, r / n)]);
    let x = k.lu().solve(&rhs).expect("nonsingular Kronecker operator");
    CMatrix::from_fn(n, n, |i, j| x[(j * n + i, 0)])
}

/// f(M) = V f(Λ) V^-1 with a scalar function on eigenvalues.
pub fn eig_function(m: &CMatrix, f: impl Fn(C64) -> C64) -> CMatrix {
    let e = eig(m).unwrap();
    let n = m.nrows();
    let fl = CMatrix::from_fn(n, n, |i, j| if i == j { f(e.values[i]) } else { C64::new(0.0, 0.0) });
    &e.vectors * fl * inverse(&e.vectors).unwrap()
}

/// G(jω) through an explicit dense inverse.
pub fn dense_response(sys: &StateSpace, w: f64) -> CMatrix {
    let n = sys.n();
    let m = eye(n) * C64::new(0.0, w) - sys.a();
    sys.c() * m.try_inverse().unwrap() * sys.b() + sys.d()
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of a matrix-valued function.
#[allow(clippy::excessive_precision)]
pub fn gk_quad(f: &dyn Fn(f64) -> CMatrix, a: f64, b: f64, tol: f64) -> CMatrix {
    const XK: [f64; 8] = [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ];
    const WK: [f64; 8] = [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ];
    const WG: [f64; 4] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ];
    fn rule(f: &dyn Fn(f64) -> CMatrix, a: f64, b: f64) -> (CMatrix, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = &fc * C64::new(WK[7], 0.0);
        let mut g = &fc * C64::new(WG[3], 0.0);
        for i in 0..7 {
            let f1 = f(c - h * XK[i]);
            let f2 = f(c + h * XK[i]);
            let s = &f1 + &f2;
            k += &s * C64::new(WK[i], 0.0);
            if i % 2 == 1 {
                g += &s * C64::new(WG[i / 2], 0.0);
            }
        }
        let k = k * C64::new(h, 0.0);
        let g = g * C64::new(h, 0.0);
        let err = (&k - &g).norm();
        (k, err)
    }
    fn recurse(f: &dyn Fn(f64) -> CMatrix, a: f64, b: f64, tol: f64, depth: u32) -> CMatrix {
        let (v, err) = rule(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let c = 0.5 * (a + b);
        recurse(f, a, c, tol / 2.0, depth + 1) + recurse(f, c, b, tol / 2.0, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// (1/2π) ∫_{w1}^{w2} (jνI − A)^-1 B B* (jνI − A)^-* dν
pub fn fl_controllability_quadrature(sys: &StateSpace, w1: f64, w2: f64) -> CMatrix {
    let n = sys.n();
    let f = |nu: f64| {
        let r = (eye(n) * C64::new(0.0, nu) - sys.a()).try_inverse().unwrap();
        let x = &r * sys.b();
        &x * x.adjoint() * C64::new(1.0 / (2.0 * std::f64::consts::PI), 0.0)
    };
    gk_quad(&f, w1, w2, 1e-12)
}

/// Characteristic polynomial coefficients (monic, highest first) by
/// Faddeev-LeVerrier.
pub fn char_poly(a: &CMatrix) -> Vec<C64> {
    let n = a.nrows();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + eye(n) * coeffs[k - 1];
        let am = a * &m;
        let c = -am.trace() / C64::new(k as f64, 0.0);
        coeffs.push(c);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand-Kerner iteration.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let eval = |z: C64| coeffs.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * 3.0).collect();
    for _ in 0..2000 {
        let prev = roots.clone();
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
        }
        let change: f64 = roots.iter().zip(&prev).map(|(a, b)| (a - b).norm()).sum();
        if change < 1e-15 {
            break;
        }
    }
    roots
}

/// Random Hurwitz system, possibly complex, for property checks.
pub fn random_hurwitz(rng: &mut ChaCha8Rng, n: usize, m: usize, p: usize, complex: bool) -> StateSpace {
    loop {
        let mut a = if complex { randn_complex(rng, n, n) } else { randn(rng, n, n) };
        for i in 0..n {
            a[(i, i)] -= C64::new(2.5, 0.0);
        }
        let mk = |rng: &mut ChaCha8Rng, r, c| if complex { randn_complex(rng, r, c) } else { randn(rng, r, c) };
        let b = mk(rng, n, m);
        let c = mk(rng, p, n);
        let d = mk(rng, p, m);
        let s = StateSpace::new(a, b, c, d).unwrap();
        if fdbt::sysmodel::is_hurwitz(&s).unwrap().0 {
            return s;
        }
    }
}

/// Random transform with condition number at most `max_cond`.
pub fn random_transform(rng: &mut ChaCha8Rng, n: usize, max_cond: f64) -> CMatrix {
    loop {
        let t = randn(rng, n, n) + eye(n) * C64::new(2.0, 0.0);
        let s = t.clone().svd(false, false).singular_values;
        let mx = s.iter().cloned().fold(0.0, f64::max);
        let mn = s.iter().cloned().fold(f64::INFINITY, f64::min);
        if mx / mn <= max_cond {
            return t;
        }
    }
}

pub fn scalar_system() -> StateSpace {
    StateSpace::new(
        rmat(1, 1, &[-1.0]),
        rmat(1, 1, &[1.0]),
        rmat(1, 1, &[1.0]),
        rmat(1, 1, &[0.0]),
    )
    .unwrap()
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
