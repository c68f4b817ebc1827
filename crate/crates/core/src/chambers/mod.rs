//! Chamber change, equivariant limits and the fundamental exact sequence.

mod derive;
mod fundamental;
mod ladder;
mod tail;
mod torsion;

pub use derive::{derive_chamber, j_map, JMap, JMapDegree};
pub use fundamental::{fundamental_sequence, FundamentalSequence, SequenceCheck, SequenceDegree};
pub use ladder::{down_shift, up_shift, ChamberLadder};
pub use tail::{equivariant_groups, Direction, EquivariantGroups, TailModule, Tower};
pub use torsion::{torsion_map_properties, torsion_transport, TorsionDegree, TorsionReport};

use crate::deltacx::{CohomologyPackage, Degree};
use crate::error::Result;

/// `h = m - ζ`, cross-checked against the lowest degree where `D` is nonzero.
pub fn h_invariant(p: &CohomologyPackage) -> Result<Degree> {
    let h = p.h()?;
    let two_h = (h * 2).to_integer();
    let window = (two_h - 4, two_h + 4);
    let f = fundamental_sequence(p, window)?;
    if !f.h_matches(window) {
        return Err(crate::error::Error::Inconsistent(format!(
            "lowest nonzero degree of D is {:?}, expected 2h",
            f.lowest_d
        )));
    }
    Ok(h)
}
