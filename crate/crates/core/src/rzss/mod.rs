//! The weight spectral sequence of a semistable degeneration.
//!
//! Input is the cohomology of the strata `X(I)` of the special fiber together with
//! restriction and Gysin maps ([`StrataCohomology`]). From it we assemble
//!
//! ```text
//! E_1^{p,q} = ⊕_{i >= max(0,-p)} H^{q+n-2i}(Y^{(p+2i)})(-i)  ⇒  H^{p+q}(nearby fiber)
//! ```
//!
//! with `d_1` built from Čech-signed restrictions and Gysin maps, the monodromy `N`
//! shifting `(p, q, i) -> (p+2, q-2, i-1)`, the `E_2` page, the limit cohomology with its
//! monodromy filtration, and the monodromy-weight criterion on `E_2`.
//!
//! Weights are integers: `(-i)` adds `2i`. `N` lowers the weight by 2 as an endomorphism.

mod e2;
mod input;
mod page;

pub use e2::{
    compute_e2, euler_check, limit_cohomology, limit_purity, mw_check, weight_degeneration_check,
    DegenerationVerdict, E2Page, E2Term, EulerReport, LimitCohomology, MwEntry, MwReport,
};
pub use input::{
    adjacent_pairs, rational_curve_configuration, Adjointness, AdjointnessEntry, StrataCohomology,
};
pub use page::{
    build_d1, build_d1_with, build_e1, monodromy_on_e1, Block, GysinSign, SpectralPage, Term,
};

use crate::error::Result;
use crate::field::Field;

/// Everything computed from one input.
#[derive(Clone, Debug)]
pub struct Analysis<F> {
    pub warnings: Vec<String>,
    pub e1: SpectralPage<F>,
    pub e2: E2Page<F>,
    pub degeneration: DegenerationVerdict,
    pub limits: Vec<LimitCohomology<F>>,
    pub mw: MwReport,
    /// `(w, mw pure of weight w)` for each limit `H^w`, from the filtration-level test.
    pub purity: Vec<(i64, bool)>,
    pub euler: EulerReport,
}

/// Validates the input and runs the whole pipeline.
pub fn analyze<F: Field>(sc: &StrataCohomology<F>) -> Result<Analysis<F>> {
    let warnings = sc.validate_input()?;
    let e1 = monodromy_on_e1(&build_d1(sc, &build_e1(sc))?)?;
    let e2 = compute_e2(&e1)?;
    let degeneration = weight_degeneration_check(&e1, &e2);
    let limits = limit_cohomology(&e2);
    let mw = mw_check(&e2);
    let purity = limit_purity(&limits)?;
    let euler = euler_check(&e1, &e2, &limits);
    Ok(Analysis {
        warnings,
        e1,
        e2,
        degeneration,
        limits,
        mw,
        purity,
        euler,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::exactalg::WeightedSpace;
    use crate::snc::DualComplexData;
    use crate::Q;

    #[test]
    fn tate_curve() {
        let sc = rational_curve_configuration::<Q>(DualComplexData::cycle(3, 1).unwrap()).unwrap();
        let an = analyze(&sc).unwrap();
        assert_eq!(
            an.e2.dims(),
            BTreeMap::from([((-1, 1), 1), ((0, -1), 1), ((0, 1), 1), ((1, -1), 1)])
        );
        assert!(an.degeneration.degenerates);
        let h: Vec<_> = an.limits.iter().map(|l| l.space.clone()).collect();
        assert_eq!(h[0], WeightedSpace::pure(0, 1));
        assert_eq!(h[1], WeightedSpace::new([(0, 1), (2, 1)]));
        assert_eq!(h[2], WeightedSpace::pure(2, 1));
        assert_eq!(an.limits[1].gr_dims(), vec![(-1, 1), (1, 1)]);
        assert_eq!(an.limits[1].monodromy.rank(), 1);
        assert!(an.mw.holds);
        assert_eq!(an.mw.entries.len(), 1);
        assert!(an.purity.iter().all(|&(_, p)| p));
        assert_eq!(
            an.euler,
            EulerReport {
                e1: 0,
                e2: 0,
                limit: 0
            }
        );
    }

    #[test]
    fn degeneration_of_a_line() {
        let sc = rational_curve_configuration::<Q>(DualComplexData::chain(2, 1).unwrap()).unwrap();
        let an = analyze(&sc).unwrap();
        assert_eq!(an.e2.dims(), BTreeMap::from([((0, -1), 1), ((0, 1), 1)]));
        let dims: Vec<usize> = an.limits.iter().map(|l| l.dim()).collect();
        assert_eq!(dims, vec![1, 0, 1]);
        assert!(an.mw.holds && an.mw.entries.is_empty());
        assert_eq!(
            an.euler,
            EulerReport {
                e1: 2,
                e2: 2,
                limit: 2
            }
        );
    }

    #[test]
    fn smooth_fiber() {
        let dc = DualComplexData::smooth(1);
        let sc =
            StrataCohomology::<Q>::new(dc, BTreeMap::from([(vec![0], vec![1, 4, 1])])).unwrap();
        let an = analyze(&sc).unwrap();
        assert_eq!(
            an.e2.dims(),
            BTreeMap::from([((0, -1), 1), ((0, 0), 4), ((0, 1), 1)])
        );
        assert_eq!(an.limits[1].space, WeightedSpace::pure(1, 4));
        assert!(an.limits.iter().all(|l| l.monodromy.is_zero()));
        assert!(an.mw.holds);
        assert_eq!(an.euler.limit, -2);
    }
}
