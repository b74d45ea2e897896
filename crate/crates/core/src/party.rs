use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A party (tensor slot) in a multiparty state.
///
/// Parties carry fixed lexical labels: slot 0 is `A`, slot 1 is `B`, and so
/// on. All group operations work on slot indices; labels exist for I/O.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Party(pub usize);

impl Party {
    pub const A: Party = Party(0);
    pub const B: Party = Party(1);
    pub const C: Party = Party(2);
    pub const D: Party = Party(3);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn label(self) -> String {
        if self.0 < 26 {
            char::from(b'A' + self.0 as u8).to_string()
        } else {
            format!("P{}", self.0)
        }
    }

    pub fn from_label(label: &str) -> Result<Party> {
        let trimmed = label.trim();
        let mut chars = trimmed.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => Ok(Party(c as usize - 'A' as usize)),
            _ => Err(Error::UnknownParty(label.to_string())),
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl Serialize for Party {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Party {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Party::from_label(&s).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Comma-joined labels for a group, e.g. `A,C`.
pub fn group_label(parties: &[Party]) -> String {
    parties
        .iter()
        .map(|p| p.label())
        .collect::<Vec<_>>()
        .join(",")
}

/// Errors unless the given groups are pairwise disjoint.
pub fn ensure_disjoint(groups: &[&[Party]]) -> Result<()> {
    for (i, a) in groups.iter().enumerate() {
        for b in groups.iter().skip(i + 1) {
            if a.iter().any(|p| b.contains(p)) {
                return Err(Error::OverlappingGroups(format!(
                    "{} overlaps {}",
                    group_label(a),
                    group_label(b)
                )));
            }
        }
    }
    Ok(())
}

/// Errors unless every party is a valid slot of a state with `n_parties` slots
/// and no party repeats within the group.
pub fn ensure_valid_group(group: &[Party], n_parties: usize) -> Result<()> {
    for (i, p) in group.iter().enumerate() {
        if p.index() >= n_parties {
            return Err(Error::UnknownParty(p.label()));
        }
        if group[..i].contains(p) {
            return Err(Error::InvalidArgument(format!(
                "party {} repeated in group",
                p.label()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for i in 0..8 {
            let p = Party(i);
            assert_eq!(Party::from_label(&p.label()).unwrap(), p);
        }
        assert!(Party::from_label("a").is_err());
        assert!(Party::from_label("AB").is_err());
        assert!(Party::from_label("").is_err());
    }

    #[test]
    fn disjointness() {
        let g1 = [Party::A, Party::B];
        let g2 = [Party::C];
        assert!(ensure_disjoint(&[&g1, &g2]).is_ok());
        let g3 = [Party::B];
        assert!(ensure_disjoint(&[&g1, &g3]).is_err());
    }
}
