//! Dense real polynomials, constant term first, plus an exact rational
//! mirror used as a test oracle.
//!
//! Root extraction is tuned for the structure functions met in this crate:
//! low degree, real spectrum of interest, and occasional high multiplicity
//! at a module boundary. Odd-order roots are bracketed by a sign scan and
//! bisected; even-order roots show up as local minima of |p| and are
//! polished on the derivative instead.

/// Dense polynomial over f64. Invariant: no trailing exact zeros, so the
/// zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

/// Real roots with aligned multiplicities, sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootList {
    pub roots: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

impl RootList {
    pub fn from_pairs(pairs: Vec<(f64, usize)>) -> Self {
        let (roots, multiplicities) = pairs.into_iter().unzip();
        RootList { roots, multiplicities }
    }

    /// Groups exactly equal values of an unsorted root listing.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.total_cmp(b));
        let mut out = RootList::default();
        for v in values {
            if out.roots.last() == Some(&v) {
                *out.multiplicities.last_mut().unwrap() += 1;
            } else {
                out.roots.push(v);
                out.multiplicities.push(1);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.roots.iter().copied().zip(self.multiplicities.iter().copied())
    }

    /// Each root repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.iter()
            .flat_map(|(r, m)| std::iter::repeat(r).take(m))
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let t = s - a;
    (s, (a - (s - t)) + (b - t))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `scale * prod_i (x - roots[i])`. Panics on a degenerate scale of zero
    /// so silent collapse to the zero polynomial cannot mask caller bugs.
    pub fn from_roots(roots: &[f64], scale: f64) -> Self {
        assert!(scale != 0.0, "degenerate scale");
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i] -= r * ci;
                next[i + 1] += ci;
            }
            c = next;
        }
        for ci in &mut c {
            *ci *= scale;
        }
        Poly::new(c)
    }

    /// Compensated Horner evaluation; error stays close to one rounding of
    /// the condition-free result even for ill-scaled coefficients.
    pub fn eval(&self, x: f64) -> f64 {
        let Some((&top, rest)) = self.coeffs.split_last() else {
            return 0.0;
        };
        let mut s = top;
        let mut err = 0.0;
        for &c in rest.iter().rev() {
            let (p, pe) = two_prod(s, x);
            let (t, se) = two_sum(p, c);
            s = t;
            err = err * x + (pe + se);
        }
        s + err
    }

    /// `sum_i |c_i| |x|^i`, the natural magnitude scale for backward-error
    /// style acceptance thresholds.
    pub fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn deriv(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(0.0)
                        + other.coeffs.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    /// All real roots in `[lo, hi]` with multiplicities, sorted ascending.
    ///
    /// A root is accepted when `|p(r)| <= 10 * tol * magnitude_at(r)`, i.e.
    /// `tol` is a relative backward-error tolerance. Positions of simple
    /// roots come out at machine accuracy; a root of multiplicity m is only
    /// determined to roughly the m-th root of the evaluation noise, which
    /// callers must budget for.
    pub fn roots_real(&self, lo: f64, hi: f64, tol: f64) -> RootList {
        if self.coeffs.len() <= 1 || !(lo < hi) {
            return RootList::default();
        }
        let deg = self.coeffs.len() - 1;
        let span = hi - lo;
        let n_panels = ((span * 4096.0).ceil() as usize).clamp(2048, 1 << 19);
        let step = span / n_panels as f64;
        let xs: Vec<f64> = (0..=n_panels).map(|i| lo + step * i as f64).collect();
        let fs: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        let dp = self.deriv();
        let tol = tol.max(1e-14);
        let accept = |p: f64, r: f64| p.abs() <= 10.0 * tol * self.magnitude_at(r).max(1e-300);

        let mut cands: Vec<f64> = Vec::new();
        for i in 0..n_panels {
            if fs[i] == 0.0 {
                cands.push(xs[i]);
            } else if fs[i] * fs[i + 1] < 0.0 {
                cands.push(bisect(|x| self.eval(x), xs[i], xs[i + 1]));
            }
        }
        if fs[n_panels] == 0.0 {
            cands.push(xs[n_panels]);
        }

        // Even-order roots: strict local minimum of |p| without an adjacent
        // sign change; the derivative brackets the critical point.
        for i in 1..n_panels {
            if fs[i - 1] == 0.0 || fs[i] == 0.0 || fs[i + 1] == 0.0 {
                continue;
            }
            if fs[i - 1] * fs[i] < 0.0 || fs[i] * fs[i + 1] < 0.0 {
                continue;
            }
            if fs[i].abs() <= fs[i - 1].abs() && fs[i].abs() < fs[i + 1].abs() {
                let (a, b) = (xs[i - 1], xs[i + 1]);
                if dp.eval(a) * dp.eval(b) < 0.0 {
                    let r = bisect(|x| dp.eval(x), a, b);
                    if accept(self.eval(r), r) {
                        cands.push(r);
                    }
                }
            }
        }

        cands.sort_by(|a, b| a.total_cmp(b));
        let mut clusters: Vec<Vec<f64>> = Vec::new();
        for r in cands {
            let merge = clusters.last().is_some_and(|c| {
                let last = *c.last().unwrap();
                r - last < (4.0 * step).max(1e-6 * (1.0 + r.abs()))
            });
            if merge {
                clusters.last_mut().unwrap().push(r);
            } else {
                clusters.push(vec![r]);
            }
        }
        let roots: Vec<f64> = clusters.iter().map(|c| c[c.len() / 2]).collect();

        let d2 = dp.deriv();
        let mut out = Vec::with_capacity(roots.len());
        for (k, &r) in roots.iter().enumerate() {
            let mut near = f64::INFINITY;
            if k > 0 {
                near = near.min(r - roots[k - 1]);
            }
            if k + 1 < roots.len() {
                near = near.min(roots[k + 1] - r);
            }
            let m = self.multiplicity_at(&dp, &d2, r, near, span, deg);
            out.push((r, m));
        }
        RootList::from_pairs(out)
    }

    /// Standard multiplicity estimator p'^2 / (p'^2 - p p'') sampled a safe
    /// distance h from the root, where the signal dominates rounding noise
    /// but contamination from the other roots is still O(m h / gap).
    fn multiplicity_at(
        &self,
        dp: &Poly,
        d2: &Poly,
        r: f64,
        nearest: f64,
        span: f64,
        deg: usize,
    ) -> usize {
        let h = (0.01 * (1.0 + r.abs()))
            .min(nearest / 8.0)
            .min(span / 16.0);
        let mut sum = 0.0;
        let mut n = 0u32;
        for x in [r - h, r + h] {
            let p = self.eval(x);
            let p1 = dp.eval(x);
            let denom = p1 * p1 - p * d2.eval(x);
            if denom > 0.0 && p1 != 0.0 {
                sum += p1 * p1 / denom;
                n += 1;
            }
        }
        if n == 0 {
            return 1;
        }
        ((sum / n as f64).round() as usize).clamp(1, deg)
    }
}

pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

pub mod exact {
    //! Arbitrary-precision mirror of [`Poly`](super::Poly), for places where
    //! coefficient identities must hold exactly rather than to rounding.

    use num::{BigRational, ToPrimitive, Zero};

    #[derive(Debug, Clone, PartialEq)]
    pub struct RatPoly {
        coeffs: Vec<BigRational>,
    }

    /// Shorthand for small literal rationals.
    pub fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    impl RatPoly {
        pub fn new(mut coeffs: Vec<BigRational>) -> Self {
            while coeffs.last().is_some_and(|c| c.is_zero()) {
                coeffs.pop();
            }
            RatPoly { coeffs }
        }

        pub fn zero() -> Self {
            RatPoly { coeffs: Vec::new() }
        }

        /// Exact images of the given f64 coefficients; requires finite input.
        pub fn from_f64s(coeffs: &[f64]) -> Self {
            RatPoly::new(
                coeffs
                    .iter()
                    .map(|&c| BigRational::from_float(c).expect("finite coefficient"))
                    .collect(),
            )
        }

        pub fn from_roots(roots: &[BigRational], scale: BigRational) -> Self {
            let mut c = vec![BigRational::from_integer(1.into())];
            for r in roots {
                let mut next = vec![BigRational::zero(); c.len() + 1];
                for (i, ci) in c.iter().enumerate() {
                    next[i] -= r * ci;
                    next[i + 1] += ci;
                }
                c = next;
            }
            for ci in &mut c {
                *ci *= &scale;
            }
            RatPoly::new(c)
        }

        pub fn coeffs(&self) -> &[BigRational] {
            &self.coeffs
        }

        /// Coefficient of x^i, zero past the degree.
        pub fn coeff(&self, i: usize) -> BigRational {
            self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
        }

        pub fn eval(&self, x: &BigRational) -> BigRational {
            let mut acc = BigRational::zero();
            for c in self.coeffs.iter().rev() {
                acc = acc * x + c;
            }
            acc
        }

        pub fn mul(&self, other: &RatPoly) -> Self {
            if self.coeffs.is_empty() || other.coeffs.is_empty() {
                return RatPoly::zero();
            }
            let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
            for (i, a) in self.coeffs.iter().enumerate() {
                for (j, b) in other.coeffs.iter().enumerate() {
                    c[i + j] += a * b;
                }
            }
            RatPoly::new(c)
        }

        pub fn add(&self, other: &RatPoly) -> Self {
            let n = self.coeffs.len().max(other.coeffs.len());
            RatPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
        }

        pub fn scaled(&self, s: &BigRational) -> Self {
            RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
        }

        /// Nearest-f64 projection of each coefficient.
        pub fn to_poly(&self) -> super::Poly {
            super::Poly::new(
                self.coeffs
                    .iter()
                    .map(|c| c.to_f64().expect("coefficient fits in f64"))
                    .collect(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::exact::{rat, RatPoly};
    use super::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn from_roots_matches_product_form() {
        // x (x-2)^4 (x-4) at x = 1 is 1 * 1 * (-3).
        let p = Poly::from_roots(&[0.0, 2.0, 2.0, 2.0, 2.0, 4.0], 1.0);
        assert_eq!(p.degree(), Some(6));
        assert_eq!(p.eval(1.0), -3.0);
        assert_eq!(p.eval(0.0), 0.0);
        assert_eq!(p.eval(2.0), 0.0);
        assert_eq!(p.eval(4.0), 0.0);
        // Flipping the scale gives the boundary-zero pattern x (2-x)^4 (4-x).
        assert_eq!(p.scaled(-1.0).eval(1.0), 3.0);
    }

    #[test]
    fn eval_agrees_with_exact_oracle() {
        let p = Poly::from_roots(&[0.25, -3.5, 7.0, 7.0, 1e3], -196608.0);
        let q = RatPoly::from_f64s(p.coeffs());
        for i in -40..=40 {
            let x = 0.37 * i as f64;
            let exact = q.eval(&num::BigRational::from_float(x).unwrap());
            let approx = p.eval(x);
            let exact_f = exact.numer().to_string().parse::<f64>().unwrap()
                / exact.denom().to_string().parse::<f64>().unwrap();
            let scale = p.magnitude_at(x).max(1.0);
            assert!(
                (approx - exact_f).abs() <= 1e-13 * scale,
                "x = {x}: {approx} vs {exact_f}"
            );
        }
    }

    #[test]
    fn deriv_of_cubic() {
        let p = Poly::new(vec![1.0, -2.0, 0.0, 5.0]);
        assert_eq!(p.deriv().coeffs(), &[-2.0, 0.0, 15.0]);
        assert_eq!(Poly::new(vec![3.0]).deriv(), Poly::zero());
    }

    #[test]
    fn simple_roots_recovered_to_machine_accuracy() {
        // Boundary-root pattern for a three-level module with index pair (1, 2).
        let p = Poly::from_roots(&[0.0, 3.0, 4.0, 5.0, 6.0, 9.0], -2.5);
        let roots = p.roots_real(-1.0, 10.0, 1e-12);
        let expect = [0.0, 3.0, 4.0, 5.0, 6.0, 9.0];
        assert_eq!(roots.len(), expect.len());
        for ((r, m), e) in roots.iter().zip(expect) {
            assert!((r - e).abs() <= 1e-9 * (1.0 + e.abs()), "{r} vs {e}");
            assert_eq!(m, 1);
        }
    }

    #[test]
    fn double_root_found_without_sign_change() {
        let p = Poly::from_roots(&[1.0, 1.0], 3.0);
        let roots = p.roots_real(0.0, 2.0, 1e-12);
        assert_eq!(roots.len(), 1);
        assert!((roots.roots[0] - 1.0).abs() < 1e-7);
        assert_eq!(roots.multiplicities[0], 2);
    }

    #[test]
    fn triple_root_position_within_noise_budget() {
        let p = Poly::from_roots(&[2.0, 2.0, 2.0], -1.5);
        let roots = p.roots_real(0.0, 4.0, 1e-10);
        assert_eq!(roots.len(), 1);
        assert!((roots.roots[0] - 2.0).abs() < 1e-4);
        assert_eq!(roots.multiplicities[0], 3);
    }

    #[test]
    fn quadruple_boundary_root_of_coulomb_pattern() {
        // x (x-2)^4 (x-4): the two simple roots stay sharp, the order-four
        // root is positioned only to the fourth root of machine noise.
        let p = Poly::from_roots(&[0.0, 2.0, 2.0, 2.0, 2.0, 4.0], 1.0);
        let roots = p.roots_real(-0.5, 4.5, 1e-10);
        assert_eq!(roots.roots.len(), 3);
        assert!((roots.roots[0] - 0.0).abs() < 1e-9);
        assert!((roots.roots[1] - 2.0).abs() < 1e-3);
        assert!((roots.roots[2] - 4.0).abs() < 1e-9);
        assert_eq!(roots.multiplicities, vec![1, 4, 1]);
        assert_eq!(roots.total_multiplicity(), 6);
    }

    #[test]
    fn no_roots_reported_for_positive_polynomial() {
        let p = Poly::new(vec![1.0, 0.0, 1.0]);
        assert!(p.roots_real(-10.0, 10.0, 1e-12).is_empty());
    }

    #[test]
    fn random_well_separated_roots_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(071_624);
        for _ in 0..100 {
            let n = rng.gen_range(3..=6);
            let mut roots: Vec<f64> = Vec::new();
            while roots.len() < n {
                let r = rng.gen_range(-5.0..5.0);
                if roots.iter().all(|&q: &f64| (q - r).abs() > 0.2) {
                    roots.push(r);
                }
            }
            roots.sort_by(|a, b| a.total_cmp(b));
            let scale = if rng.gen::<bool>() { 1.7 } else { -0.6 };
            let p = Poly::from_roots(&roots, scale);
            let found = p.roots_real(-5.5, 5.5, 1e-12);
            assert_eq!(found.len(), n, "roots {roots:?}");
            for ((r, m), e) in found.iter().zip(&roots) {
                assert!((r - e).abs() < 1e-7, "{r} vs {e}");
                assert_eq!(m, 1);
            }
        }
    }

    #[test]
    fn evaluation_is_linear_in_the_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = Poly::new((0..6).map(|_| rng.gen_range(-3.0..3.0)).collect());
            let q = Poly::new((0..4).map(|_| rng.gen_range(-3.0..3.0)).collect());
            let x: f64 = rng.gen_range(-2.0..2.0);
            let lhs = p.add(&q).eval(x);
            let rhs = p.eval(x) + q.eval(x);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    #[should_panic(expected = "degenerate scale")]
    fn zero_scale_is_rejected() {
        let _ = Poly::from_roots(&[1.0, 2.0], 0.0);
    }

    #[test]
    fn root_list_grouping_and_expansion() {
        let rl = super::RootList::from_values(vec![2.0, 0.0, 2.0, 4.0, 2.0, 2.0]);
        assert_eq!(rl.roots, vec![0.0, 2.0, 4.0]);
        assert_eq!(rl.multiplicities, vec![1, 4, 1]);
        assert_eq!(rl.expanded(), vec![0.0, 2.0, 2.0, 2.0, 2.0, 4.0]);
    }

    #[test]
    fn exact_from_roots_matches_float_construction() {
        let p = Poly::from_roots(&[0.0, 2.0, 2.0, 2.0, 2.0, 4.0], 1.0);
        let q = RatPoly::from_roots(
            &[rat(0, 1), rat(2, 1), rat(2, 1), rat(2, 1), rat(2, 1), rat(4, 1)],
            rat(1, 1),
        );
        assert_eq!(q.to_poly(), p);
        assert_eq!(q.eval(&rat(1, 1)), rat(-3, 1));
    }
}
