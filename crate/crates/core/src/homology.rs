//! Homology of a window of a chain complex given by rational-entry matrices,
//! over either ground ring.

use crate::algebra::{fmt_rational, GroundRing};
use crate::error::{Error, Result};
use crate::linalg::{homology_subquotient, rational::rank_q, HomologyGroup, IntMatrix, LinalgError, RatMatrix, Subquotient};

pub(crate) fn integral(m: &RatMatrix) -> Result<IntMatrix> {
    m.to_integer().ok_or_else(|| {
        let (_, _, c) = m
            .first_nonzero_where(|x| !x.is_integer())
            .expect("some entry is non-integral");
        Error::NonIntegral(fmt_rational(c))
    })
}

/// `ker(d_out) / im(d_in)`. Over Q only the rank is reported.
pub fn homology_in(ground: GroundRing, d_in: &RatMatrix, d_out: &RatMatrix) -> Result<HomologyGroup> {
    match ground {
        GroundRing::Integers => Ok(integral_homology(d_in, d_out)?.group()),
        GroundRing::Rationals => {
            if d_in.rows() != d_out.cols() {
                return Err(LinalgError::DimensionMismatch {
                    context: "homology_in",
                    expected: d_out.cols(),
                    found: d_in.rows(),
                }
                .into());
            }
            let comp = d_out.mul(d_in);
            if let Some((row, col, v)) = comp.first_nonzero() {
                return Err(Error::NonIntegral(format!("d_out*d_in != 0 at ({row}, {col}): {}", fmt_rational(v))));
            }
            Ok(HomologyGroup::free(d_out.cols() - rank_q(d_out) - rank_q(d_in)))
        }
    }
}

pub(crate) fn integral_homology(d_in: &RatMatrix, d_out: &RatMatrix) -> Result<Subquotient> {
    Ok(homology_subquotient(&integral(d_in)?, &integral(d_out)?)?)
}
