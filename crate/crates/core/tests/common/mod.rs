//! Dense state-vector / density-matrix reference simulator for small
//! stabilizer programs. Qubit `q` is bit `q` of a basis index.

#![allow(dead_code)]

pub mod two_copy;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qpl_core::stab::{CliffordGate, PauliString, Sign, StabilizerTableau};

pub type CMat = DMatrix<Complex64>;

pub const TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense matrix of a Hermitian Pauli string (`Y = iXZ`).
pub fn pauli_matrix(p: &PauliString) -> CMat {
    let m = p.num_qubits();
    let dim = 1usize << m;
    let (mut xmask, mut zmask, mut ys) = (0usize, 0usize, 0u32);
    for q in 0..m {
        if p.x(q) {
            xmask |= 1 << q;
        }
        if p.z(q) {
            zmask |= 1 << q;
        }
        if p.x(q) && p.z(q) {
            ys += 1;
        }
    }
    let base = Complex64::i().powu(ys) * c(p.sign().value() as f64);
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let parity = (col & zmask).count_ones() % 2;
        let v = if parity == 1 { -base } else { base };
        out[(col ^ xmask, col)] = v;
    }
    out
}

/// `ρ = 2^{-m} Π (I + g_i)`.
pub fn density(t: &StabilizerTableau) -> CMat {
    let m = t.num_qubits();
    let dim = 1usize << m;
    let mut rho = CMat::identity(dim, dim);
    for g in t.generators() {
        let proj = CMat::identity(dim, dim) + pauli_matrix(g);
        rho = proj * rho;
    }
    rho / c(dim as f64)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Unitary (up to global phase) of a one- or two-qubit Clifford, built from
/// its generator images: `U|b⟩ = Π_j X'_j^{b_j} U|0⟩` with `U|0⟩` the joint
/// +1 eigenvector of the `Z'_j`.
pub fn gate_unitary(gate: &CliffordGate) -> CMat {
    let a = gate.arity();
    let dim = 1usize << a;
    let image = |i: usize| {
        let lp = gate.images()[i];
        let mut p = PauliString::identity(a);
        for j in 0..a {
            p.set_bits(j, (lp.bits >> (2 * j)) & 1 == 1, (lp.bits >> (2 * j + 1)) & 1 == 1);
        }
        if lp.negative {
            p.set_sign(Sign::Minus);
        }
        pauli_matrix(&p)
    };
    let mut proj = CMat::identity(dim, dim);
    for j in 0..a {
        proj = (CMat::identity(dim, dim) + image(2 * j + 1)) * proj / c(2.0);
    }
    // any basis vector with nonzero overlap works
    let col = (0..dim)
        .map(|b| proj.column(b).into_owned())
        .find(|v| v.norm() > 1e-6)
        .unwrap();
    let psi0 = &col / c(col.norm());
    let mut u = CMat::zeros(dim, dim);
    for b in 0..dim {
        let mut v = psi0.clone();
        for j in 0..a {
            if (b >> j) & 1 == 1 {
                v = image(2 * j) * v;
            }
        }
        u.set_column(b, &v);
    }
    u
}

/// Embeds a local operator acting on `support` (local bit `j` = qubit
/// `support[j]`) into `m` qubits.
pub fn embed(local: &CMat, support: &[usize], m: usize) -> CMat {
    let dim = 1usize << m;
    let mask: usize = support.iter().map(|&q| 1usize << q).sum();
    let local_index = |s: usize| {
        support
            .iter()
            .enumerate()
            .map(|(j, &q)| ((s >> q) & 1) << j)
            .sum::<usize>()
    };
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        for row in 0..dim {
            if row & !mask == col & !mask {
                out[(row, col)] = local[(local_index(row), local_index(col))];
            }
        }
    }
    out
}

pub fn apply_gate(rho: &CMat, gate: &CliffordGate, support: &[usize], m: usize) -> CMat {
    let u = embed(&gate_unitary(gate), support, m);
    &u * rho * u.adjoint()
}

/// Partial trace keeping `keep` (in increasing order of qubit index).
pub fn partial_trace(rho: &CMat, keep: &[usize], m: usize) -> CMat {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let traced: Vec<usize> = (0..m).filter(|q| !keep.contains(q)).collect();
    let kd = 1usize << keep.len();
    let td = 1usize << traced.len();
    let compose = |a: usize, t: usize| {
        let mut s = 0usize;
        for (j, &q) in keep.iter().enumerate() {
            s |= ((a >> j) & 1) << q;
        }
        for (j, &q) in traced.iter().enumerate() {
            s |= ((t >> j) & 1) << q;
        }
        s
    };
    let mut out = CMat::zeros(kd, kd);
    for r in 0..kd {
        for cc in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..td {
                acc += rho[(compose(r, t), compose(cc, t))];
            }
            out[(r, cc)] = acc;
        }
    }
    out
}

/// `Tr_q ρ ⊗ I/2` with the identity reinserted at `q`.
pub fn erase(rho: &CMat, q: usize, m: usize) -> CMat {
    let keep: Vec<usize> = (0..m).filter(|&x| x != q).collect();
    let reduced = partial_trace(rho, &keep, m);
    let half = CMat::identity(2, 2) / c(2.0);
    let dim = 1usize << m;
    let mut out = CMat::zeros(dim, dim);
    let squeeze = |s: usize| {
        keep.iter()
            .enumerate()
            .map(|(j, &k)| ((s >> k) & 1) << j)
            .sum::<usize>()
    };
    for r in 0..dim {
        for cc in 0..dim {
            out[(r, cc)] = reduced[(squeeze(r), squeeze(cc))] * half[((r >> q) & 1, (cc >> q) & 1)];
        }
    }
    out
}

/// Projects onto the `outcome` eigenspace of `op`; returns the post-state
/// and the probability of the outcome.
pub fn measure(rho: &CMat, op: &PauliString, outcome: Sign) -> (CMat, f64) {
    let dim = rho.nrows();
    let proj = (CMat::identity(dim, dim) + pauli_matrix(op) * c(outcome.value() as f64)) / c(2.0);
    let post = &proj * rho * &proj;
    let prob = post.trace().re;
    (post / c(prob.max(1e-300)), prob)
}

/// Von Neumann entropy in bits.
///
/// The spectrum is taken from the real symmetric embedding
/// `[[Re ρ, -Im ρ], [Im ρ, Re ρ]]`, which repeats every eigenvalue twice.
pub fn entropy(rho: &CMat) -> f64 {
    let d = rho.nrows();
    let real = DMatrix::<f64>::from_fn(2 * d, 2 * d, |r, c| {
        let z = rho[(r % d, c % d)];
        match (r < d, c < d) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let eig = jacobi_eigenvalues(real);
    eig.iter()
        .filter(|&&l| l > 1e-12)
        .map(|&l| -0.5 * l * l.log2())
        .sum()
}

pub fn subsystem_entropy(rho: &CMat, subset: &[usize], m: usize) -> f64 {
    if subset.is_empty() {
        return 0.0;
    }
    entropy(&partial_trace(rho, subset, m))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}
