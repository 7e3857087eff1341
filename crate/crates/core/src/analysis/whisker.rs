//! The counting lower bound for whiskered domains.
//!
//! Between consecutive marked points the chain must clear one plateau whose
//! height is separated from the marked level, and no single leaf arc can
//! pass two plateaus: horizontal chords of the tube never bridge plateaus
//! (heights are separated by more than a tube diameter) and vertical chords
//! never bridge risers. Each hop therefore costs at least two arcs after
//! the opening one, giving `N(p₀, p_k) ≥ 2k + 1`.

use crate::domains::WhiskerSpec;
use crate::{Error, Result};

/// Certified lower bound `2k + 1` on the accessibility index between the
/// marked points `p₀` and `p_k`, after machine-checking the geometric
/// hypotheses of the counting argument (all folded into
/// [`WhiskerSpec::validate`]).
pub fn whisker_lower_bound(spec: &WhiskerSpec<f64>, k: usize) -> Result<u32> {
    spec.validate()?;
    if k == 0 || k > spec.hump_count() {
        return Err(Error::ProbeSetup(format!(
            "marked index k = {k} must satisfy 1 ≤ k ≤ {}",
            spec.hump_count()
        )));
    }
    Ok(2 * k as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::default_whisker;

    #[test]
    fn bound_values() {
        let spec = default_whisker(3).unwrap();
        assert_eq!(whisker_lower_bound(&spec, 1).unwrap(), 3);
        assert_eq!(whisker_lower_bound(&spec, 3).unwrap(), 7);
        assert!(whisker_lower_bound(&spec, 0).is_err());
        assert!(whisker_lower_bound(&spec, 4).is_err());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = default_whisker(2).unwrap();
        spec.width = spec.eps * 3.0;
        assert!(whisker_lower_bound(&spec, 1).is_err());
    }
}
