//! Rewriting `x[l,m]y` as a combination of six commutator expressions.

use super::poly::NcPoly;

/// The six signed terms whose sum is `x[l,m]y`:
///
/// `[xyl,m] − [xy,m]l + [xm,[y,l]] − [x,[y,l]]m + [xl,[m,y]] − [x,[m,y]]l`.
///
/// Signs are folded into the returned polynomials.
pub fn sandwich_terms(x: &NcPoly, l: &NcPoly, m: &NcPoly, y: &NcPoly) -> [NcPoly; 6] {
    let xy = x * y;
    let yl = y.bracket(l);
    let my = m.bracket(y);
    [
        (&xy * l).bracket(m),
        -&(&xy.bracket(m) * l),
        (x * m).bracket(&yl),
        -&(&x.bracket(&yl) * m),
        (x * l).bracket(&my),
        -&(&x.bracket(&my) * l),
    ]
}

/// Expands both sides of the six-term identity over free variables
/// `x1 = x, x2 = l, x3 = m, x4 = y` and compares them.
pub fn verify_sandwich_identity() -> bool {
    let [x, l, m, y] = [1, 2, 3, 4].map(NcPoly::var);
    let lhs = &(&x * &l.bracket(&m)) * &y;
    let rhs = sandwich_terms(&x, &l, &m, &y).iter().fold(NcPoly::zero(), |acc, t| &acc + t);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::eval::eval_seq;
    use crate::qmatrix::QMatrix;

    #[test]
    fn symbolic_identity_holds() {
        assert!(verify_sandwich_identity());
    }

    #[test]
    fn all_ones_gives_zero() {
        let one = NcPoly::one();
        let terms = sandwich_terms(&one, &one, &one, &one);
        assert!(terms.iter().all(NcPoly::is_zero));
    }

    #[test]
    fn exact_matrix_check() {
        let [x, l, m, y] = [1, 2, 3, 4].map(NcPoly::var);
        let lhs = &(&x * &l.bracket(&m)) * &y;
        let mats = [
            QMatrix::from_int_rows(&[&[1, 2, 0], &[0, -1, 3], &[4, 0, 1]]),
            QMatrix::from_int_rows(&[&[0, 1, 0], &[2, 0, 5], &[1, 1, 1]]),
            QMatrix::from_int_rows(&[&[3, 0, -2], &[0, 0, 1], &[1, 2, 0]]),
            QMatrix::from_int_rows(&[&[1, 0, 0], &[7, 1, 0], &[0, -3, 2]]),
        ];
        let want = eval_seq(&lhs, &mats).unwrap();
        let mut got = QMatrix::zeros(3);
        for t in sandwich_terms(&x, &l, &m, &y) {
            got = got.add(&eval_seq(&t, &mats).unwrap());
        }
        assert_eq!(got, want);
    }
}
