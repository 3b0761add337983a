//! Brute-force two-copy evolution on `2n` qubits, the reference for the
//! transfer-matrix purity.
//!
//! Copy 1 of data qubit `q` is bit `q` of an index, copy 2 is bit `n + q`.

use qpl_core::haar::NoiseFamily;

pub struct TwoCopy {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl TwoCopy {
    fn zeros(n: usize) -> Self {
        let dim = 1 << (2 * n);
        Self { n, dim, data: vec![0.0; dim * dim] }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.dim + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.dim + c]
    }

    fn join(&self, a: usize, b: usize) -> usize {
        a | (b << self.n)
    }

    fn swap_copies(&self, r: usize) -> usize {
        let lo = r & ((1 << self.n) - 1);
        (r >> self.n) | (lo << self.n)
    }

    /// `E[(V⊗V) O (V⊗V)†]` for Haar `V` on the data qubits `qs` (both
    /// copies): `α I + β S` on those qubits with
    /// `α = (Tr O - Tr SO / D) / (D² - 1)`, `β = (Tr SO - Tr O / D) / (D² - 1)`
    /// taken as partial traces.
    fn twirl(&self, qs: &[usize]) -> Self {
        let n = self.n;
        let dl = 1usize << qs.len();
        let spread = |i: usize, off: usize| {
            qs.iter()
                .enumerate()
                .map(|(j, &q)| ((i >> j) & 1) << (q + off))
                .sum::<usize>()
        };
        let local = |i: usize, j: usize| spread(i, 0) | spread(j, n);
        let mask = local(dl - 1, dl - 1);
        let rests: Vec<usize> = (0..self.dim).filter(|r| r & mask == 0).collect();
        let d = dl as f64;
        let norm = d * d - 1.0;
        let mut out = Self::zeros(n);
        for &rr in &rests {
            for &rc in &rests {
                let (mut tr, mut tr_s) = (0.0, 0.0);
                for i in 0..dl {
                    for j in 0..dl {
                        tr += self.at(rr | local(i, j), rc | local(i, j));
                        tr_s += self.at(rr | local(j, i), rc | local(i, j));
                    }
                }
                let alpha = (tr - tr_s / d) / norm;
                let beta = (tr_s - tr / d) / norm;
                for i in 0..dl {
                    for j in 0..dl {
                        *out.at_mut(rr | local(i, j), rc | local(i, j)) += alpha;
                        *out.at_mut(rr | local(j, i), rc | local(i, j)) += beta;
                    }
                }
            }
        }
        out
    }

    /// Average of `P_π^{⊗2} O P_π^{⊗2 †}` over all qubit permutations.
    fn permutation_average(&self) -> Self {
        let perms = permutations(self.n);
        let mut out = Self::zeros(self.n);
        let w = 1.0 / perms.len() as f64;
        for perm in &perms {
            let map: Vec<usize> = (0..self.dim)
                .map(|r| {
                    (0..2 * self.n)
                        .map(|b| {
                            let target = if b < self.n { perm[b] } else { self.n + perm[b - self.n] };
                            ((r >> b) & 1) << target
                        })
                        .sum()
                })
                .collect();
            for r in 0..self.dim {
                for c in 0..self.dim {
                    *out.at_mut(map[r], map[c]) += w * self.at(r, c);
                }
            }
        }
        out
    }

    /// `Σ_K K O K^T` with the real 2×2 Kraus operators acting on bit `b`.
    fn channel(&self, b: usize, kraus: &[[[f64; 2]; 2]]) -> Self {
        let mut out = Self::zeros(self.n);
        let bit = 1usize << b;
        for k in kraus {
            for r in 0..self.dim {
                let rb = (r >> b) & 1;
                for c in 0..self.dim {
                    let cb = (c >> b) & 1;
                    let mut acc = 0.0;
                    for u in 0..2 {
                        for v in 0..2 {
                            let rr = (r & !bit) | (u << b);
                            let cc = (c & !bit) | (v << b);
                            acc += k[rb][u] * self.at(rr, cc) * k[cb][v];
                        }
                    }
                    *out.at_mut(r, c) += acc;
                }
            }
        }
        out
    }

    /// `Tr(S_B O)`.
    pub fn swap_trace(&self) -> f64 {
        (0..self.dim).map(|r| self.at(self.swap_copies(r), r)).sum()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn kraus(family: NoiseFamily, p: f64) -> Vec<[[f64; 2]; 2]> {
    match family {
        NoiseFamily::Depolarizing => {
            let (a, b) = ((1.0 - p).sqrt(), (p / 3.0).sqrt());
            vec![
                [[a, 0.0], [0.0, a]],
                [[0.0, b], [b, 0.0]],
                // Y up to the phase i, which cancels in K ρ K†
                [[0.0, -b], [b, 0.0]],
                [[b, 0.0], [0.0, -b]],
            ]
        }
        NoiseFamily::AmplitudeDamping => vec![
            [[1.0, 0.0], [0.0, (1.0 - p).sqrt()]],
            [[0.0, p.sqrt()], [0.0, 0.0]],
        ],
    }
}

/// Two-copy inputs obtained by contracting `|Φ⟩⟨Φ|^{⊗2}` on `R R'` with the
/// identity and with the swap. Reference qubit `j` is entangled with data
/// qubit `j`.
pub fn initial_operators(n: usize, k: usize) -> (TwoCopy, TwoCopy) {
    let dr = 1usize << k;
    // ⟨r|_R |Φ⟩ = 2^{-k/2} |r⟩ on the data register, so every term below
    // carries (2^{-k/2})^4
    let w = (dr as f64).powi(-2);
    let mut x_i = TwoCopy::zeros(n);
    let mut x_s = TwoCopy::zeros(n);
    for r in 0..dr {
        for r2 in 0..dr {
            // ρ_B ⊗ ρ_B = Σ |φ_r⟩⟨φ_r| ⊗ |φ_r2⟩⟨φ_r2|
            let a = x_i.join(r, r2);
            *x_i.at_mut(a, a) += w;
            // Σ |φ_r⟩⟨φ_r2| ⊗ |φ_r2⟩⟨φ_r|
            let (a, b) = (x_s.join(r, r2), x_s.join(r2, r));
            *x_s.at_mut(a, b) += w;
        }
    }
    (x_i, x_s)
}

pub fn oracle_profile(n: usize, k: usize, max_d: usize, family: NoiseFamily, p: f64) -> Vec<f64> {
    let ks = kraus(family, p);
    let prepare = |mut o: TwoCopy| {
        for q in 0..n {
            o = o.twirl(&[q]);
        }
        o.permutation_average()
    };
    let (x_i, x_s) = initial_operators(n, k);
    let (mut o_i, mut o_s) = (prepare(x_i), prepare(x_s));
    let mut out = vec![-o_i.swap_trace().log2() + o_s.swap_trace().log2()];
    for _ in 0..max_d {
        for o in [&mut o_i, &mut o_s] {
            let mut next = std::mem::replace(o, TwoCopy::zeros(n));
            for pair in (0..n).step_by(2) {
                next = next.twirl(&[pair, pair + 1]);
            }
            next = next.permutation_average();
            for b in 0..2 * n {
                next = next.channel(b, &ks);
            }
            *o = next;
        }
        out.push(-o_i.swap_trace().log2() + o_s.swap_trace().log2());
    }
    out
}

