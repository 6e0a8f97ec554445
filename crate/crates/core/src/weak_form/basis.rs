use crate::geometry::Point;

/// Values and derivatives of one basis function at one point:
/// `[u, u_x, u_y, u_xx, u_xy, u_yy]`.
pub type Jet = [f64; 6];

/// Monomials `xi^i eta^j`, `i + j <= degree`, in the scaled coordinates
/// `xi = (x - cx) / h`, `eta = (y - cy) / h`.
///
/// The ordering is by total degree and the first function is the constant.
/// Scaling by the length `h` keeps the Gram matrices of equal-shaped domains
/// identical up to powers of `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RitzBasis {
    pub degree: usize,
    pub center: Point,
    pub length_scale: f64,
    exponents: Vec<(i32, i32)>,
}

impl RitzBasis {
    pub fn new(degree: usize, center: Point, length_scale: f64) -> Self {
        let mut exponents = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
        for total in 0..=degree as i32 {
            for j in 0..=total {
                exponents.push((total - j, j));
            }
        }
        Self { degree, center, length_scale, exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[(i32, i32)] {
        &self.exponents
    }

    /// Index of the monomial `xi^i eta^j`, if present.
    pub fn index_of(&self, i: i32, j: i32) -> Option<usize> {
        self.exponents.iter().position(|&e| e == (i, j))
    }

    /// Fill `out[k]` with the jet of basis function `k` at `p`.
    pub fn jets_into(&self, p: Point, out: &mut [Jet]) {
        let h = self.length_scale;
        let xi = (p[0] - self.center[0]) / h;
        let eta = (p[1] - self.center[1]) / h;
        let d = self.degree + 1;
        let mut px = vec![1.0; d];
        let mut py = vec![1.0; d];
        for k in 1..d {
            px[k] = px[k - 1] * xi;
            py[k] = py[k - 1] * eta;
        }
        let pow = |v: &[f64], k: i32| if k < 0 { 0.0 } else { v[k as usize] };
        let (h1, h2) = (1.0 / h, 1.0 / (h * h));
        for (jet, &(i, j)) in out.iter_mut().zip(&self.exponents) {
            let (fi, fj) = (i as f64, j as f64);
            jet[0] = pow(&px, i) * pow(&py, j);
            jet[1] = fi * pow(&px, i - 1) * pow(&py, j) * h1;
            jet[2] = fj * pow(&px, i) * pow(&py, j - 1) * h1;
            jet[3] = fi * (fi - 1.0) * pow(&px, i - 2) * pow(&py, j) * h2;
            jet[4] = fi * fj * pow(&px, i - 1) * pow(&py, j - 1) * h2;
            jet[5] = fj * (fj - 1.0) * pow(&px, i) * pow(&py, j - 2) * h2;
        }
    }

    pub fn jets(&self, p: Point) -> Vec<Jet> {
        let mut out = vec![[0.0; 6]; self.len()];
        self.jets_into(p, &mut out);
        out
    }

    /// Jet of the expansion `sum_k coeffs[k] phi_k` at `p`.
    pub fn eval(&self, coeffs: &[f64], p: Point) -> Jet {
        let jets = self.jets(p);
        let mut acc = [0.0; 6];
        for (c, jet) in coeffs.iter().zip(&jets) {
            for (a, v) in acc.iter_mut().zip(jet) {
                *a += c * v;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn size_and_order() {
        let b = RitzBasis::new(14, [0.0, 0.0], 1.0);
        assert_eq!(b.len(), 120);
        assert_eq!(b.exponents()[0], (0, 0));
        assert_eq!(&b.exponents()[1..3], &[(1, 0), (0, 1)]);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let b = RitzBasis::new(5, [0.3, -0.2], 1.7);
        let p = [0.41, 0.77];
        let h = 1e-5;
        let jets = b.jets(p);
        let plus_x = b.jets([p[0] + h, p[1]]);
        let minus_x = b.jets([p[0] - h, p[1]]);
        let plus_y = b.jets([p[0], p[1] + h]);
        let minus_y = b.jets([p[0], p[1] - h]);
        for k in 0..b.len() {
            assert_relative_eq!(jets[k][1], (plus_x[k][0] - minus_x[k][0]) / (2.0 * h), epsilon = 1e-8);
            assert_relative_eq!(jets[k][2], (plus_y[k][0] - minus_y[k][0]) / (2.0 * h), epsilon = 1e-8);
            assert_relative_eq!(jets[k][3], (plus_x[k][1] - minus_x[k][1]) / (2.0 * h), epsilon = 1e-7);
            assert_relative_eq!(jets[k][4], (plus_y[k][1] - minus_y[k][1]) / (2.0 * h), epsilon = 1e-7);
            assert_relative_eq!(jets[k][5], (plus_y[k][2] - minus_y[k][2]) / (2.0 * h), epsilon = 1e-7);
        }
    }
}
