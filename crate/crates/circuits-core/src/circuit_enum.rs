//! Circuit enumeration by facet-subset search and by standard-form
//! conversion, plus closed-form circuit counts for converted representations.
//!
//! `naive_circuits` walks all row subsets I of B with |I| = n - rank(A) - 1
//! and keeps the kernel generator of [A; B_I] whenever that stack has rank
//! n - 1. `standard_form_circuits` instead enumerates the support-minimal
//! kernel of [A 0; B I] and post-filters with the rank test; both must agree
//! with each other (and with the polyhedral-model route) on every input.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::comb::{binomial, Combinations};
use crate::exactnum::{rat, RatMatrix, Rational};
use crate::polyhedron::{CircuitSet, Polyhedron};

/// Enumerates C(A, B) by brute-force subset search over the rows of B.
///
/// When rank(A) = n the kernel of A is trivial and the circuit set is empty.
pub fn naive_circuits(poly: &Polyhedron) -> CircuitSet {
    let n = poly.dim();
    let eq = poly.eq_mat();
    let ineq = poly.ineq_mat();
    let mut set = CircuitSet::symmetric();
    let rank_eq = eq.rank();
    if rank_eq + 1 > n {
        return set;
    }
    let subset_size = n - rank_eq - 1;
    for rows in Combinations::new(ineq.rows(), subset_size) {
        let stacked = eq.vstack(&ineq.select_rows(&rows));
        if stacked.rank() != n - 1 {
            continue;
        }
        let kernel = stacked.kernel_basis();
        debug_assert_eq!(kernel.len(), 1);
        let circuit = poly
            .circuit_from_direction(&kernel[0])
            .expect("kernel generator of a rank n-1 stack is nonzero");
        set.insert(circuit);
    }
    set
}

/// Circuits of a standard-form constraint matrix M: support-minimal vectors
/// of ker(M) \ {0}, realized as `naive_circuits` with A := M and B := I.
pub fn support_minimal_kernel(m: &RatMatrix) -> CircuitSet {
    let cols = m.cols();
    let standard = Polyhedron::new(
        m.clone(),
        vec![Rational::zero(); m.rows()],
        RatMatrix::identity(cols),
        vec![Rational::zero(); cols],
    )
    .expect("standard-form wrapper is dimensionally consistent");
    naive_circuits(&standard)
}

/// The slack-augmented constraint matrix [A 0; B I] used by the
/// standard-form conversion.
pub fn slack_augmented(poly: &Polyhedron) -> RatMatrix {
    let n = poly.dim();
    let m_b = poly.ineq_mat().rows();
    let m_a = poly.eq_mat().rows();
    let mut out = RatMatrix::zero(m_a + m_b, n + m_b);
    for r in 0..m_a {
        for c in 0..n {
            *out.at_mut(r, c) = poly.eq_mat().at(r, c).clone();
        }
    }
    for r in 0..m_b {
        for c in 0..n {
            *out.at_mut(m_a + r, c) = poly.ineq_mat().at(r, c).clone();
        }
        *out.at_mut(m_a + r, n + r) = rat(1);
    }
    out
}

/// Enumerates C(A, B) by computing the circuits of [A 0; B I] and keeping
/// the x-part of each one that passes the rank characterization.
pub fn standard_form_circuits(poly: &Polyhedron) -> CircuitSet {
    let n = poly.dim();
    let augmented = support_minimal_kernel(&slack_augmented(poly));
    let mut set = CircuitSet::symmetric();
    for member in augmented.iter() {
        let x_part: Vec<Rational> = member.direction_rat().into_iter().take(n).collect();
        if poly.is_circuit(&x_part) {
            let circuit = poly
                .circuit_from_direction(&x_part)
                .expect("x-part passed the circuit test, so it is nonzero");
            set.insert(circuit);
        }
    }
    set
}

/// |C([B -B I])| for an m_B x n matrix B with all subdeterminants nonzero:
/// 2n + 2 * sum_{d=1..n} C(n,d) C(m_B,d-1) 2^d.
pub fn count_splitfree_standard(n: u64, m_b: u64) -> u64 {
    assert!(n >= 1 && m_b >= n);
    let mut total = 2 * n;
    for d in 1..=n {
        total += 2 * binomial(n, d) * binomial(m_b, d - 1) * (1u64 << d);
    }
    total
}

/// |C([B I])| under the same hypothesis: 2 * sum_{d=1..n} C(n,d) C(m_B,d-1).
pub fn count_slack_standard(n: u64, m_b: u64) -> u64 {
    assert!(n >= 1 && m_b >= n);
    (1..=n).map(|d| 2 * binomial(n, d) * binomial(m_b, d - 1)).sum()
}

/// |C_<=([A; B])| for the canonical (inequality-only) conversion, in the
/// all-nonzero-subdeterminant case: 2 * C(m_A + m_B, n - 1).
pub fn count_canonical(n: u64, m_a: u64, m_b: u64) -> u64 {
    assert!(n >= 1 && m_a + m_b >= n - 1);
    2 * binomial(m_a + m_b, n - 1)
}

/// The additive term of the slack-conversion sandwich
/// |C(A,B)| <= |C([A 0; B I])| <= |C(A,B)| + term, where r = rank(A):
/// term = 2 * sum_{d=r+1..n-1} C(n,d) C(m_B,d-r-1). The sum is empty (and
/// the conversion exact) once r >= n - 1.
pub fn conversion_bounds(n: u64, r: u64, m_b: u64) -> u64 {
    assert!(r <= n);
    let mut term = 0;
    for d in r + 1..n {
        term += 2 * binomial(n, d) * binomial(m_b, d - r - 1);
    }
    term
}
