//! Matrix-product-state simulation of n-qubit pure states.
//!
//! The state is kept in the Schmidt (canonical) form
//!
//! ```text
//! |Ψ⟩ = Σ Q_0(i_0,v_0) V_0(v_0) Q_1(i_1,v_0,v_1) V_1(v_1) … Q_{n−1}(i_{n−1},v_{n−2}) |i_0…i_{n−1}⟩
//! ```
//!
//! where each `V_s` holds the Schmidt coefficients across the cut after site
//! `s`. Internally every site is stored as `B_s = Q_s·V_s` (and
//! `B_{n−1} = Q_{n−1}`), which is right-orthonormal; gate updates then never
//! divide by a Schmidt coefficient. [`MPSState::site_tensor`] recovers `Q_s`.
//!
//! A gate acting on qubits spanning the window `[lo, hi]` (at most three
//! sites wide) is applied by contracting the window, multiplying by the gate
//! (embedded with identities on bystander qubits), and splitting the result
//! back with SVDs from right to left. Schmidt coefficients below
//! `truncation · V_s(0)` are discarded and the bond is renormalized. When
//! the discarded weight is above rounding level the whole state is rescaled
//! to unit norm as well.

mod gate;
mod print;

pub use gate::{cnot, cz, hadamard, swap, toffoli, Gate};
pub use print::format_density;

use crate::error::{Error, Result};
use crate::matrix::{dot, norm_sqr, svd, validate_subset, MPMatrix};
use crate::precision::{MPComplex, MPReal, Precision};

/// Largest register [`MPSState::to_dense`] will materialize.
pub const MAX_DENSE_QUBITS: usize = 24;

/// Largest subset [`MPSState::rdo`] will return a density matrix for.
pub const MAX_RDO_QUBITS: usize = 12;

/// Rank-3 tensor `T(i, l, r)` with a physical index of size 2.
#[derive(Clone, Debug, PartialEq)]
struct Tensor3 {
    left: usize,
    right: usize,
    data: Vec<MPComplex>,
}

impl Tensor3 {
    #[inline]
    fn idx(&self, i: usize, l: usize, r: usize) -> usize {
        (i * self.left + l) * self.right + r
    }

    #[inline]
    fn at(&self, i: usize, l: usize, r: usize) -> &MPComplex {
        &self.data[self.idx(i, l, r)]
    }
}

/// The tensor `Q_s(i_s, v_{s−1}, v_s)` of the state's Schmidt form, with
/// shape `2 × m_{s−1} × m_s` (absent boundary bonds have size 1).
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor {
    pub site: usize,
    pub left: usize,
    pub right: usize,
    data: Vec<MPComplex>,
}

impl SiteTensor {
    pub fn get(&self, i: usize, left: usize, right: usize) -> &MPComplex {
        assert!(i < 2 && left < self.left && right < self.right);
        &self.data[(i * self.left + left) * self.right + right]
    }
}

#[derive(Clone, Debug)]
pub struct MPSState {
    prec: Precision,
    sites: Vec<Tensor3>,
    bonds: Vec<Vec<MPReal>>,
    truncation: MPReal,
    max_bond: Option<usize>,
}

impl MPSState {
    /// `|0…0⟩` at the ambient precision with the default truncation
    /// threshold `2^(−p/2)`.
    pub fn init(n: usize) -> Result<Self> {
        let prec = Precision::ambient();
        Self::with_options(n, prec, default_truncation(prec), None)
    }

    pub fn with_options(
        n: usize,
        prec: Precision,
        truncation: MPReal,
        max_bond: Option<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("an MPS needs at least one qubit".into()));
        }
        if truncation.is_sign_negative() && !truncation.is_zero() || !truncation.is_finite() {
            return Err(Error::InvalidArgument("truncation threshold must be non-negative".into()));
        }
        if max_bond == Some(0) {
            return Err(Error::InvalidArgument("bond cap must be positive".into()));
        }
        let site = Tensor3 {
            left: 1,
            right: 1,
            data: vec![MPComplex::one(prec), MPComplex::zero(prec)],
        };
        Ok(MPSState {
            prec,
            sites: vec![site; n],
            bonds: vec![vec![MPReal::one(prec)]; n - 1],
            truncation: truncation.with_precision(prec),
            max_bond,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn truncation_threshold(&self) -> &MPReal {
        &self.truncation
    }

    pub fn max_bond(&self) -> Option<usize> {
        self.max_bond
    }

    /// `V_s`, descending and strictly positive.
    pub fn bond_vector(&self, s: usize) -> &[MPReal] {
        &self.bonds[s]
    }

    pub fn bond_dimensions(&self) -> Vec<usize> {
        self.bonds.iter().map(Vec::len).collect()
    }

    /// `m_max`: the largest bond dimension (1 for a single qubit).
    pub fn max_bond_dimension(&self) -> usize {
        self.bonds.iter().map(Vec::len).max().unwrap_or(1)
    }

    /// `Q_s`, obtained from the stored `B_s` by dividing out `V_s`.
    pub fn site_tensor(&self, s: usize) -> SiteTensor {
        let b = &self.sites[s];
        let data = if s + 1 == self.n_qubits() {
            b.data.clone()
        } else {
            let v = &self.bonds[s];
            (0..b.data.len()).map(|k| b.data[k].div_real(&v[k % b.right])).collect()
        };
        SiteTensor {
            site: s,
            left: b.left,
            right: b.right,
            data,
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        let n = self.n_qubits();
        let targets = gate.targets();
        if let Some(&q) = targets.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidQubits(format!("qubit {q} out of range for {n} qubits")));
        }
        let lo = *targets.iter().min().unwrap();
        let hi = *targets.iter().max().unwrap();
        let width = hi - lo + 1;
        if width > 3 {
            return Err(Error::InvalidQubits(format!(
                "targets {targets:?} span {width} sites; at most 3 are supported, insert SWAPs"
            )));
        }
        let u = window_unitary(gate, lo, width, self.prec);
        let phi = self.contract_window(lo, hi);
        let phi = apply_physical(&u, &phi, self.sites[lo].left, self.sites[hi].right, self.prec);
        if width == 1 {
            self.sites[lo] = to_site(phi, self.sites[lo].left, self.sites[lo].right);
            return Ok(());
        }
        if self.split_window(lo, width, phi)? {
            self.restore_norm(lo);
        }
        Ok(())
    }

    /// Rescales site `lo` so that `⟨Ψ|Ψ⟩ = 1`. Needed after a truncation
    /// that dropped real weight: the bonds outside the window then no longer
    /// hold the exact Schmidt values, so the per-bond renormalization alone
    /// leaves the global norm off by the discarded weight.
    fn restore_norm(&mut self, lo: usize) {
        let norm = self.norm_sqr().sqrt();
        if norm.is_positive() {
            for z in &mut self.sites[lo].data {
                *z = z.div_real(&norm);
            }
        }
    }

    /// Window tensor `φ(l, x, r)` for sites `lo..=hi`, stored as
    /// `(l·2^w + x)·m_r + r`.
    fn contract_window(&self, lo: usize, hi: usize) -> Vec<MPComplex> {
        let first = &self.sites[lo];
        let ml = first.left;
        let mut dim = 2;
        let mut right = first.right;
        let mut cur = Vec::with_capacity(ml * 2 * right);
        for l in 0..ml {
            for x in 0..2 {
                for r in 0..right {
                    cur.push(first.at(x, l, r).clone());
                }
            }
        }
        for s in lo + 1..=hi {
            let b = &self.sites[s];
            let mut next = Vec::with_capacity(ml * dim * 2 * b.right);
            for l in 0..ml {
                for x in 0..dim {
                    let base = (l * dim + x) * right;
                    for i in 0..2 {
                        for r in 0..b.right {
                            let cur = &cur;
                            next.push(dot(self.prec, || {
                                (0..right).map(move |k| (&cur[base + k], b.at(i, k, r)))
                            }));
                        }
                    }
                }
            }
            cur = next;
            dim *= 2;
            right = b.right;
        }
        cur
    }

    /// Splits the updated window tensor back into sites, right to left.
    /// Returns whether the discarded weight is above rounding level.
    fn split_window(&mut self, lo: usize, width: usize, mut cur: Vec<MPComplex>) -> Result<bool> {
        let prec = self.prec;
        let ml = self.sites[lo].left;
        let lam_left: Vec<MPReal> = if lo == 0 {
            vec![MPReal::one(prec)]
        } else {
            self.bonds[lo - 1].clone()
        };
        let mut dim = 1usize << width;
        let mut kr = self.sites[lo + width - 1].right;
        let mut discarded = false;
        for j in (1..width).rev() {
            let half = dim / 2;
            let rows = ml * half;
            let cols = 2 * kr;
            let at = |l: usize, x: usize, k: usize| (l * dim + x) * kr + k;
            let theta = MPMatrix::from_fn(rows, cols, prec, |row, col| {
                let (l, xh) = (row / half, row % half);
                let (i, k) = (col / kr, col % kr);
                cur[at(l, xh * 2 + i, k)].scale(&lam_left[l])
            });
            let dec = svd(&theta)?;
            let kept = self.kept_count(&dec.singular_values, lo + j - 1)?;
            // Dropping coefficients at rounding level cannot move the norm
            // measurably; only real weight calls for a global rescale.
            let sum_sq = |xs: &[MPReal]| xs.iter().fold(MPReal::zero(prec), |acc, x| &acc + &x.square());
            let dropped = sum_sq(&dec.singular_values[kept..]);
            discarded |= dropped > &prec.tolerance(24) * &sum_sq(&dec.singular_values);
            let norm = norm_sqr(
                prec,
                dec.singular_values[..kept]
                    .iter()
                    .map(|s| MPComplex::from_real(s.clone()))
                    .collect::<Vec<_>>()
                    .iter(),
            )
            .sqrt();
            self.bonds[lo + j - 1] = dec.singular_values[..kept].iter().map(|s| s / &norm).collect();

            let v = &dec.v;
            let mut site = Vec::with_capacity(2 * kept * kr);
            for i in 0..2 {
                for a in 0..kept {
                    for k in 0..kr {
                        site.push(v[(i * kr + k, a)].conj());
                    }
                }
            }
            self.sites[lo + j] = Tensor3 {
                left: kept,
                right: kr,
                data: site,
            };

            let mut next = Vec::with_capacity(ml * half * kept);
            for l in 0..ml {
                for xh in 0..half {
                    for a in 0..kept {
                        let cur = &cur;
                        let z = dot(prec, || {
                            (0..cols).map(move |col| {
                                let (i, k) = (col / kr, col % kr);
                                (&cur[at(l, xh * 2 + i, k)], &v[(col, a)])
                            })
                        });
                        next.push(z.div_real(&norm));
                    }
                }
            }
            cur = next;
            dim = half;
            kr = kept;
        }
        self.sites[lo] = to_site(cur, ml, kr);
        Ok(discarded)
    }

    /// Number of leading singular values to keep on `bond`.
    fn kept_count(&self, sigma: &[MPReal], bond: usize) -> Result<usize> {
        let top = sigma.first().filter(|s| s.is_positive()).ok_or_else(|| {
            Error::CorruptedState(format!("all Schmidt coefficients on bond {bond} vanished"))
        })?;
        let floor = &self.truncation * top;
        let mut kept = sigma
            .iter()
            .take_while(|s| s.is_positive() && **s >= floor)
            .count();
        if let Some(cap) = self.max_bond {
            kept = kept.min(cap);
        }
        Ok(kept)
    }

    /// `E(r, r')` for the bond to the right of site `end - 1`, contracting
    /// sites `0..end`. Stored row-major `m × m`.
    fn left_environment(&self, end: usize) -> Vec<MPComplex> {
        let mut env = vec![MPComplex::one(self.prec)];
        let mut m = 1;
        for s in 0..end {
            let b = &self.sites[s];
            env = self.transfer_right(&env, m, b);
            m = b.right;
        }
        env
    }

    /// `E'(r, r') = Σ_{i,l,l'} E(l, l') B(i,l,r) conj(B(i,l',r'))`.
    fn transfer_right(&self, env: &[MPComplex], m: usize, b: &Tensor3) -> Vec<MPComplex> {
        let prec = self.prec;
        // half(i, l', r) = Σ_l E(l,l') B(i,l,r)
        let mut half = Vec::with_capacity(2 * m * b.right);
        for i in 0..2 {
            for lp in 0..m {
                for r in 0..b.right {
                    half.push(dot(prec, || (0..m).map(move |l| (&env[l * m + lp], b.at(i, l, r)))));
                }
            }
        }
        let half = &half;
        let mut out = Vec::with_capacity(b.right * b.right);
        for r in 0..b.right {
            for rp in 0..b.right {
                let pairs = || {
                    (0..2).flat_map(move |i| {
                        (0..m).map(move |lp| (b.at(i, lp, rp), &half[(i * m + lp) * b.right + r]))
                    })
                };
                out.push(crate::matrix::conj_dot(prec, pairs));
            }
        }
        out
    }

    /// `E(l, l')` for the bond to the left of site `start`, contracting
    /// sites `start..n`.
    fn right_environment(&self, start: usize) -> Vec<MPComplex> {
        let prec = self.prec;
        let mut env = vec![MPComplex::one(prec)];
        let mut m = 1;
        for s in (start..self.n_qubits()).rev() {
            let b = &self.sites[s];
            // half(i, l, r') = Σ_r B(i,l,r) E(r, r')
            let mut half = Vec::with_capacity(2 * b.left * m);
            for i in 0..2 {
                for l in 0..b.left {
                    for rp in 0..m {
                        half.push(dot(prec, || (0..m).map(|r| (b.at(i, l, r), &env[r * m + rp]))));
                    }
                }
            }
            let half = &half;
            let mut next = Vec::with_capacity(b.left * b.left);
            for l in 0..b.left {
                for lp in 0..b.left {
                    let pairs = || {
                        (0..2).flat_map(move |i| {
                            (0..m).map(move |rp| (b.at(i, lp, rp), &half[(i * b.left + l) * m + rp]))
                        })
                    };
                    next.push(crate::matrix::conj_dot(prec, pairs));
                }
            }
            env = next;
            m = b.left;
        }
        env
    }

    /// `⟨Ψ|Ψ⟩`.
    pub fn norm_sqr(&self) -> MPReal {
        self.left_environment(self.n_qubits())[0].re().clone()
    }

    /// Reduced density matrix of the contiguous block `a..=b`.
    pub fn rdo_block(&self, a: usize, b: usize) -> Result<MPMatrix> {
        if a > b || b >= self.n_qubits() {
            return Err(Error::InvalidQubits(format!(
                "block {a}..={b} invalid for {} qubits",
                self.n_qubits()
            )));
        }
        let subset: Vec<usize> = (a..=b).collect();
        self.rdo(&subset)
    }

    /// Reduced density matrix of the qubits in `subset` (strictly
    /// increasing), computed by contracting the chain; the first listed qubit
    /// is the most significant bit of the result's basis index.
    pub fn rdo(&self, subset: &[usize]) -> Result<MPMatrix> {
        let n = self.n_qubits();
        validate_subset(subset, n)?;
        if subset.len() > MAX_RDO_QUBITS {
            return Err(Error::InvalidQubits(format!(
                "reduced density matrix of {} qubits exceeds the limit of {MAX_RDO_QUBITS}",
                subset.len()
            )));
        }
        let prec = self.prec;
        let start = subset[0];
        let end = *subset.last().unwrap();

        // blocks[(ket, bra)] is an m×m matrix over the current bond.
        let mut m = self.sites[start].left;
        let mut kets = 1usize;
        let mut blocks: Vec<Vec<MPComplex>> = vec![self.left_environment(start)];
        for s in start..=end {
            let b = &self.sites[s];
            let kept = subset.contains(&s);
            let new_kets = if kept { kets * 2 } else { kets };
            let mut next: Vec<Vec<MPComplex>> = vec![Vec::new(); new_kets * new_kets];
            for ket in 0..kets {
                for bra in 0..kets {
                    let env = &blocks[ket * kets + bra];
                    // half(i, l', r) = Σ_l E(l,l') B(i,l,r)
                    let mut half = Vec::with_capacity(2 * m * b.right);
                    for i in 0..2 {
                        for lp in 0..m {
                            for r in 0..b.right {
                                half.push(dot(prec, || (0..m).map(move |l| (&env[l * m + lp], b.at(i, l, r)))));
                            }
                        }
                    }
                    let half = &half;
                    let close = |i: usize, j: usize| {
                        let mut out = Vec::with_capacity(b.right * b.right);
                        for r in 0..b.right {
                            for rp in 0..b.right {
                                let pairs = || {
                                    (0..m).map(move |lp| (b.at(j, lp, rp), &half[(i * m + lp) * b.right + r]))
                                };
                                out.push(crate::matrix::conj_dot(prec, pairs));
                            }
                        }
                        out
                    };
                    if kept {
                        for i in 0..2 {
                            for j in 0..2 {
                                next[(ket * 2 + i) * new_kets + bra * 2 + j] = close(i, j);
                            }
                        }
                    } else {
                        let mut sum = close(0, 0);
                        for (acc, z) in sum.iter_mut().zip(close(1, 1)) {
                            *acc += &z;
                        }
                        next[ket * new_kets + bra] = sum;
                    }
                }
            }
            blocks = next;
            kets = new_kets;
            m = b.right;
        }

        let renv = self.right_environment(end + 1);
        let mut rho = MPMatrix::zeros(kets, kets, prec);
        for ket in 0..kets {
            for bra in 0..kets {
                let d = &blocks[ket * kets + bra];
                rho[(ket, bra)] = dot(prec, || d.iter().zip(renv.iter()));
            }
        }
        let tr = rho.trace()?.re().clone();
        if !tr.is_positive() {
            return Err(Error::CorruptedState("reduced density matrix has no weight".into()));
        }
        Ok(rho.map(|z| z.div_real(&tr)))
    }

    /// Amplitudes as a `2ⁿ × 1` column, qubit 0 most significant.
    pub fn to_dense(&self) -> Result<MPMatrix> {
        let n = self.n_qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "refusing to materialize {n} qubits (limit {MAX_DENSE_QUBITS})"
            )));
        }
        let prec = self.prec;
        let mut amps = vec![MPComplex::one(prec)];
        let mut m = 1;
        let mut dim = 1;
        for b in &self.sites {
            let mut next = Vec::with_capacity(dim * 2 * b.right);
            for x in 0..dim {
                for i in 0..2 {
                    for r in 0..b.right {
                        let row = &amps[x * m..(x + 1) * m];
                        next.push(dot(prec, || row.iter().enumerate().map(move |(l, a)| (a, b.at(i, l, r)))));
                    }
                }
            }
            amps = next;
            dim *= 2;
            m = b.right;
        }
        MPMatrix::from_vec(dim, 1, amps)
    }
}

/// `2^(−p/2)`.
pub fn default_truncation(prec: Precision) -> MPReal {
    MPReal::exp2(-(prec.bits() as i32) / 2, prec)
}

/// The gate as a `2^w × 2^w` unitary on the window starting at `lo`, acting
/// as the identity on bystander qubits.
fn window_unitary(gate: &Gate, lo: usize, width: usize, prec: Precision) -> MPMatrix {
    let g = gate.unitary();
    let targets = gate.targets();
    let k = targets.len();
    let pos = |q: usize| width - 1 - (q - lo);
    let target_mask: usize = targets.iter().map(|&q| 1 << pos(q)).sum();
    let gather = |x: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .fold(0, |acc, (t, &q)| acc | (((x >> pos(q)) & 1) << (k - 1 - t)))
    };
    let dim = 1 << width;
    MPMatrix::from_fn(dim, dim, prec, |out, inp| {
        if out & !target_mask != inp & !target_mask {
            MPComplex::zero(prec)
        } else {
            g[(gather(out), gather(inp))].clone()
        }
    })
}

/// `φ'(l, x', r) = Σ_x U[x'][x] φ(l, x, r)`.
fn apply_physical(u: &MPMatrix, phi: &[MPComplex], ml: usize, mr: usize, prec: Precision) -> Vec<MPComplex> {
    let dim = u.rows();
    let mut out = Vec::with_capacity(phi.len());
    for l in 0..ml {
        for xo in 0..dim {
            let row = u.row(xo);
            for r in 0..mr {
                out.push(dot(prec, || {
                    row.iter()
                        .enumerate()
                        .filter(|(_, z)| !z.is_zero())
                        .map(move |(x, z)| (z, &phi[(l * dim + x) * mr + r]))
                }));
            }
        }
    }
    out
}

/// Reorders `(l, i, r)` data into a site tensor `(i, l, r)`.
fn to_site(phi: Vec<MPComplex>, ml: usize, mr: usize) -> Tensor3 {
    let mut slots: Vec<Option<MPComplex>> = phi.into_iter().map(Some).collect();
    let mut data = Vec::with_capacity(slots.len());
    for i in 0..2 {
        for l in 0..ml {
            for r in 0..mr {
                data.push(slots[(l * 2 + i) * mr + r].take().expect("each slot used once"));
            }
        }
    }
    Tensor3 {
        left: ml,
        right: mr,
        data,
    }
}
