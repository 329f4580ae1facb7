use crate::error::{Error, Result};
use crate::setcore::{Family, SetMask, Universe};

/// Largest universe the down-set stream accepts.
pub const MAX_DOWNSET_N: u32 = 5;

/// Every down-set of `P([n])`, each exactly once.
///
/// Down-sets correspond to antichains of their maximal elements. Antichains
/// are grown depth-first by appending masks larger than the last pick that are
/// incomparable with every earlier pick, so they appear in lexicographic order
/// of their sorted mask lists, starting from the empty antichain.
pub struct Downsets {
    universe: Universe,
    chosen: Vec<SetMask>,
    // next candidate mask to try at each depth
    cursor: Vec<u64>,
    started: bool,
}

pub fn enumerate_downsets(universe: Universe) -> Result<Downsets> {
    if universe.n() > MAX_DOWNSET_N {
        return Err(Error::UniverseSize { n: universe.n(), max: MAX_DOWNSET_N });
    }
    Ok(Downsets { universe, chosen: Vec::new(), cursor: vec![0], started: false })
}

impl Downsets {
    fn current(&self) -> Family {
        Family::new(self.universe, self.chosen.iter().copied())
            .expect("masks lie in the universe")
            .downset_closure()
    }
}

impl Iterator for Downsets {
    type Item = Family;

    fn next(&mut self) -> Option<Family> {
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        let total = self.universe.subset_count();
        loop {
            let start = *self.cursor.last()?;
            let found = (start..total).map(SetMask).find(|&m| {
                self.chosen
                    .iter()
                    .all(|&a| !a.is_subset(m) && !m.is_subset(a))
            });
            match found {
                Some(m) => {
                    *self.cursor.last_mut().expect("nonempty") = m.0 + 1;
                    self.chosen.push(m);
                    self.cursor.push(m.0 + 1);
                    return Some(self.current());
                }
                None => {
                    self.cursor.pop();
                    self.chosen.pop()?;
                }
            }
        }
    }
}
