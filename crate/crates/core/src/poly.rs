//! Dense real polynomials in ascending-coefficient order.

#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Degree after dropping exact-zero leading coefficients; the zero
    /// polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn trimmed(mut self) -> Self {
        let deg = self.degree();
        self.0.truncate(deg + 1);
        if self.0.is_empty() {
            self.0.push(0.0);
        }
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(0.0);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Multiplies by `r^k`.
    pub fn shift(&self, k: usize) -> Poly {
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    pub fn scale(&self, f: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&0.0) + other.0.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    /// Cauchy bound: every root satisfies `|x| <= 1 + max |c_k / c_deg|`.
    pub fn root_bound(&self) -> f64 {
        let deg = self.degree();
        let lead = self.0[deg];
        if deg == 0 || lead == 0.0 {
            return 0.0;
        }
        1.0 + self.0[..deg]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max)
    }

    /// Number of sign changes on `r > 0`, i.e. the node count of
    /// `P(r) r^q exp(...)`. Sampled on a geometric grid out to the Cauchy
    /// bound, with extra samples at the roots of `P'` so that pairs of close
    /// roots are not skipped.
    pub fn positive_sign_changes(&self) -> usize {
        let p = self.clone().trimmed();
        if p.degree() == 0 {
            return 0;
        }
        let bound = p.root_bound();
        let lo = (bound * 1e-12).max(f64::MIN_POSITIVE);
        let samples = 4000usize;
        let ratio = (bound * 1.5 / lo).ln() / samples as f64;
        let mut xs: Vec<f64> = (0..=samples)
            .map(|i| lo * (ratio * i as f64).exp())
            .collect();
        // critical points separate adjacent roots
        let dp = p.derivative();
        if dp.degree() > 0 {
            let grid = xs.clone();
            for w in grid.windows(2) {
                let (fa, fb) = (dp.eval(w[0]), dp.eval(w[1]));
                if fa == 0.0 {
                    xs.push(w[0]);
                } else if fa.signum() != fb.signum() {
                    xs.push(bisect(&dp, w[0], w[1]));
                }
            }
            xs.sort_by(f64::total_cmp);
        }
        let mut changes = 0;
        let mut prev = 0.0f64;
        for x in xs {
            let v = p.eval(x);
            if v == 0.0 {
                continue;
            }
            if prev != 0.0 && v.signum() != prev.signum() {
                changes += 1;
            }
            prev = v;
        }
        changes
    }
}

fn bisect(p: &Poly, mut lo: f64, mut hi: f64) -> f64 {
    let flo = p.eval(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
