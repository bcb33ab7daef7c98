//! Commutator spaces, Lie ideals and two-sided ideals.

use super::algebra::{AlgElement, FdAlgebra};
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::freealg::GaussRat;

/// `[U, V]`: span of brackets of basis pairs.
pub fn commutator_space(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    if u.algebra() != v.algebra() {
        return Err(Error::AlgebraMismatch(u.algebra().blocks().to_vec(), v.algebra().blocks().to_vec()));
    }
    let mut out = Subspace::zero(u.algebra());
    let vb = v.basis();
    for a in u.basis() {
        for b in &vb {
            out.insert(&a.bracket(b))?;
            if out.is_full() {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// `U·V`: span of products of basis pairs.
pub fn product_space(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    if u.algebra() != v.algebra() {
        return Err(Error::AlgebraMismatch(u.algebra().blocks().to_vec(), v.algebra().blocks().to_vec()));
    }
    let mut out = Subspace::zero(u.algebra());
    let vb = v.basis();
    for a in u.basis() {
        for b in &vb {
            out.insert(&a.mul(b))?;
        }
    }
    Ok(out)
}

/// Smallest Lie ideal containing `gens`.
///
/// Each newly added basis vector is bracketed with every matrix unit; the
/// queue empties once the span is closed under `[·, A]`.
pub fn lie_closure(algebra: &FdAlgebra, gens: &[AlgElement]) -> Result<Subspace> {
    let mut out = Subspace::zero(algebra);
    let mut queue = Vec::new();
    for g in gens {
        if out.insert(g)? {
            queue.push(g.clone());
        }
    }
    let units = algebra.unit_basis();
    while let Some(x) = queue.pop() {
        if out.is_full() {
            break;
        }
        for e in &units {
            let c = x.bracket(e);
            if out.insert(&c)? {
                queue.push(c);
            }
        }
    }
    Ok(out)
}

/// Whether `[U, A] ⊆ U`.
pub fn is_lie_ideal(u: &Subspace) -> bool {
    let units = u.algebra().unit_basis();
    u.basis().iter().all(|x| units.iter().all(|e| u.contains(&x.bracket(e)).expect("same algebra")))
}

/// Sum of the listed blocks as a subspace.
pub fn block_ideal(algebra: &FdAlgebra, blocks: &[usize]) -> Subspace {
    let mut out = Subspace::zero(algebra);
    for &b in blocks {
        let n = algebra.blocks()[b];
        for i in 0..n {
            for j in 0..n {
                out.insert(&algebra.unit(b, i, j)).expect("same algebra");
            }
        }
    }
    out
}

/// Two-sided ideal `span(A·S·A)`: the sum of the blocks in which some
/// generator is nonzero.
pub fn ideal_generated(algebra: &FdAlgebra, gens: &[AlgElement]) -> Result<Subspace> {
    let mut support = Vec::new();
    for g in gens {
        algebra.check(g)?;
        for (b, m) in g.blocks().iter().enumerate() {
            if !m.is_zero() {
                support.push(b);
            }
        }
    }
    support.sort_unstable();
    support.dedup();
    Ok(block_ideal(algebra, &support))
}

/// Every two-sided ideal, one per subset of blocks.
pub fn two_sided_ideals(algebra: &FdAlgebra) -> Vec<Subspace> {
    let m = algebra.blocks().len();
    (0u64..1 << m)
        .map(|mask| {
            let blocks: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).collect();
            block_ideal(algebra, &blocks)
        })
        .collect()
}

/// `I_k`: the intersection of the kernels of all representations of
/// dimension at most `k`, which is the sum of the blocks larger than `k`.
pub fn ideal_ik(algebra: &FdAlgebra, k: usize) -> Subspace {
    let blocks: Vec<usize> = (0..algebra.blocks().len()).filter(|&b| algebra.blocks()[b] > k).collect();
    block_ideal(algebra, &blocks)
}

/// `[A, A]`: traceless matrices in every block.
pub fn commutator_subspace(algebra: &FdAlgebra) -> Subspace {
    let mut out = Subspace::zero(algebra);
    for (b, &n) in algebra.blocks().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.insert(&algebra.unit(b, i, j)).expect("same algebra");
                } else if i > 0 {
                    out.insert(&algebra.unit(b, 0, 0).sub(&algebra.unit(b, i, i))).expect("same algebra");
                }
            }
        }
    }
    out
}

/// Scalars in each block.
pub fn center(algebra: &FdAlgebra) -> Subspace {
    let mut out = Subspace::zero(algebra);
    for (b, &n) in algebra.blocks().iter().enumerate() {
        let mut z = algebra.zero().into_blocks();
        z[b] = crate::qmatrix::QMatrix::identity(n);
        out.insert(&algebra.element(z).expect("shape")).expect("same algebra");
    }
    out
}

/// `[I_k, A]`.
pub fn ideal_commutator(algebra: &FdAlgebra, k: usize) -> Subspace {
    commutator_space(&ideal_ik(algebra, k), &Subspace::full(algebra)).expect("same algebra")
}

/// Whether `(1 + x) u (1 − x) ∈ U` for every basis vector `u`.
pub fn conjugation_preserves(u: &Subspace, x: &AlgElement) -> bool {
    let one = u.algebra().one();
    let left = one.add(x);
    let right = one.sub(x);
    u.basis().iter().all(|b| u.contains(&left.mul(b).mul(&right)).expect("same algebra"))
}

/// For `x² = 0`: `(1 + x) u (1 − x) = u + [x,u] + ½[x,[x,u]]`.
pub fn conjugation_expansion(x: &AlgElement, u: &AlgElement) -> AlgElement {
    let xu = x.bracket(u);
    u.add(&xu).add(&x.bracket(&xu).scale(&GaussRat::ratio(1, 2)))
}

/// Whether `A[L,L]A ⊆ L + L·L` for a Lie ideal `L`.
pub fn bracket_ideal_containment_check(l: &Subspace) -> Result<bool> {
    if !is_lie_ideal(l) {
        return Err(Error::NotLieIdeal);
    }
    let ll = commutator_space(l, l)?;
    let lhs = ideal_generated(l.algebra(), &ll.basis())?;
    let rhs = l.sum(&product_space(l, l)?)?;
    rhs.contains_subspace(&lhs)
}

/// Whether the ideal generated by `[L, A]` equals `span([L,A] + [L,A]·[L,A])`.
pub fn ideal_of_commutators_check(l: &Subspace) -> Result<bool> {
    let la = commutator_space(l, &Subspace::full(l.algebra()))?;
    let ideal = ideal_generated(l.algebra(), &la.basis())?;
    let spanned = la.sum(&product_space(&la, &la)?)?;
    Ok(ideal == spanned)
}

/// Which of the four Lie ideals of `M_n` a subspace is, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimpleLieIdeal {
    Zero,
    Scalars,
    Traceless,
    Everything,
}

pub fn classify_in_matrix_algebra(u: &Subspace) -> Option<SimpleLieIdeal> {
    let a = u.algebra();
    if a.blocks().len() != 1 {
        return None;
    }
    if u.is_zero() {
        Some(SimpleLieIdeal::Zero)
    } else if *u == center(a) {
        Some(SimpleLieIdeal::Scalars)
    } else if *u == commutator_subspace(a) {
        Some(SimpleLieIdeal::Traceless)
    } else if u.is_full() {
        Some(SimpleLieIdeal::Everything)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(b: &[usize]) -> FdAlgebra {
        FdAlgebra::new(b.to_vec()).unwrap()
    }

    /// Brute `span(A·S·A)` over matrix units.
    fn brute_ideal(a: &FdAlgebra, gens: &[AlgElement]) -> Subspace {
        let units = a.unit_basis();
        let mut out = Subspace::zero(a);
        for g in gens {
            for l in &units {
                for r in &units {
                    out.insert(&l.mul(g).mul(r)).unwrap();
                }
            }
        }
        out
    }

    #[test]
    fn commutator_space_examples() {
        let m2 = FdAlgebra::matrix(2);
        let full = Subspace::full(&m2);
        // Oracle: all 16 unit-pair brackets.
        let units = m2.unit_basis();
        let brute: Vec<AlgElement> =
            units.iter().flat_map(|a| units.iter().map(move |b| a.bracket(b))).collect();
        let sl2 = commutator_space(&full, &full).unwrap();
        assert_eq!(sl2, Subspace::span(&m2, &brute).unwrap());
        assert_eq!(sl2.dim(), 3);
        assert_eq!(sl2, commutator_subspace(&m2));
        assert!(commutator_space(&full, &center(&m2)).unwrap().is_zero());
        let m3 = FdAlgebra::matrix(3);
        let ones = Subspace::span(&m3, &[m3.one()]).unwrap();
        assert!(commutator_space(&ones, &Subspace::full(&m3)).unwrap().is_zero());
    }

    #[test]
    fn lie_closure_examples() {
        let m2 = FdAlgebra::matrix(2);
        assert_eq!(lie_closure(&m2, &[m2.unit(0, 0, 1)]).unwrap(), commutator_subspace(&m2));
        assert_eq!(lie_closure(&m2, &[m2.one()]).unwrap(), center(&m2));
        assert!(lie_closure(&m2, &[m2.unit(0, 0, 0)]).unwrap().is_full());
    }

    #[test]
    fn ideals() {
        let a = blocks(&[1, 2, 3]);
        let e = a.unit(1, 0, 1);
        let i = ideal_generated(&a, std::slice::from_ref(&e)).unwrap();
        assert_eq!(i, block_ideal(&a, &[1]));
        assert_eq!(i, brute_ideal(&a, &[e]));
        assert!(ideal_generated(&a, &[a.zero()]).unwrap().is_zero());
        let mut g = a.one().into_blocks();
        g[1] = crate::qmatrix::QMatrix::zeros(2);
        let g = a.element(g).unwrap();
        let i = ideal_generated(&a, std::slice::from_ref(&g)).unwrap();
        assert_eq!(i, block_ideal(&a, &[0, 2]));
        assert_eq!(i, brute_ideal(&a, &[g]));
        assert_eq!(two_sided_ideals(&a).len(), 8);
    }

    #[test]
    fn ik_examples() {
        let a = blocks(&[1, 2, 3]);
        assert_eq!(ideal_ik(&a, 1).dim(), 13);
        assert!(ideal_ik(&a, 3).is_zero());
        assert!(ideal_ik(&a, 0).is_full());
        for k in 0..4 {
            assert!(ideal_ik(&a, k).contains_subspace(&ideal_ik(&a, k + 1)).unwrap());
            assert!(ideal_commutator(&a, k).contains_subspace(&ideal_commutator(&a, k + 1)).unwrap());
        }
    }

    #[test]
    fn commutators_and_center() {
        assert!(commutator_subspace(&blocks(&[1, 1])).is_zero());
        let a = blocks(&[1, 2, 3]);
        assert_eq!(center(&a).dim(), 3);
        let c = commutator_subspace(&a);
        assert_eq!(c.dim(), 11);
        assert_eq!(c, commutator_space(&Subspace::full(&a), &Subspace::full(&a)).unwrap());
        assert!(c.intersect(&center(&a)).unwrap().is_zero());
        assert!(c.sum(&center(&a)).unwrap().is_full());
    }

    #[test]
    fn conjugation_examples() {
        let m3 = FdAlgebra::matrix(3);
        let sl3 = commutator_subspace(&m3);
        let x = m3.unit(0, 0, 2).scale(&GaussRat::from(5));
        assert!(is_lie_ideal(&sl3));
        assert!(conjugation_preserves(&sl3, &x));

        let m2 = FdAlgebra::matrix(2);
        let u = Subspace::span(&m2, &[m2.unit(0, 0, 1)]).unwrap();
        assert!(!is_lie_ideal(&u));
        let x = m2.unit(0, 1, 0);
        assert!(!conjugation_preserves(&u, &x));
        let one = m2.one();
        let conj = one.add(&x).mul(&m2.unit(0, 0, 1)).mul(&one.sub(&x));
        let expected = m2
            .unit(0, 0, 1)
            .add(&m2.unit(0, 1, 1))
            .sub(&m2.unit(0, 0, 0))
            .sub(&m2.unit(0, 1, 0));
        assert_eq!(conj, expected);
        assert_eq!(conjugation_expansion(&x, &m2.unit(0, 0, 1)), expected);
        assert!(is_lie_ideal(&Subspace::full(&m2)));
    }

    #[test]
    fn bracket_ideal_containment_examples() {
        let m2 = FdAlgebra::matrix(2);
        let sl2 = commutator_subspace(&m2);
        assert!(bracket_ideal_containment_check(&sl2).unwrap());
        assert!(product_space(&sl2, &sl2).unwrap().is_full());
        assert!(bracket_ideal_containment_check(&center(&m2)).unwrap());
        assert!(bracket_ideal_containment_check(&Subspace::zero(&m2)).unwrap());
        let u = Subspace::span(&m2, &[m2.unit(0, 0, 1)]).unwrap();
        assert!(matches!(bracket_ideal_containment_check(&u), Err(Error::NotLieIdeal)));
    }

    #[test]
    fn classification_labels() {
        let m3 = FdAlgebra::matrix(3);
        assert_eq!(classify_in_matrix_algebra(&Subspace::zero(&m3)), Some(SimpleLieIdeal::Zero));
        assert_eq!(classify_in_matrix_algebra(&center(&m3)), Some(SimpleLieIdeal::Scalars));
        assert_eq!(classify_in_matrix_algebra(&commutator_subspace(&m3)), Some(SimpleLieIdeal::Traceless));
        assert_eq!(classify_in_matrix_algebra(&Subspace::full(&m3)), Some(SimpleLieIdeal::Everything));
        let u = Subspace::span(&m3, &[m3.unit(0, 0, 1)]).unwrap();
        assert_eq!(classify_in_matrix_algebra(&u), None);
    }
}
