//! A single identifier covering all nine algorithms and their modes, used by
//! reports, the benchmark records, and the CLI.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::nopiv::NopivVariant;
use crate::piv::{Mode, PivVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VariantId {
    Nopiv(NopivVariant),
    Piv(PivVariant, Mode),
}

impl VariantId {
    /// The nine algorithm families, unblocked.
    pub fn all_unblocked() -> Vec<VariantId> {
        let mut v: Vec<VariantId> = NopivVariant::ALL
            .into_iter()
            .map(VariantId::Nopiv)
            .collect();
        v.extend(
            PivVariant::ALL
                .into_iter()
                .map(|p| VariantId::Piv(p, Mode::Unblocked)),
        );
        v
    }

    /// Reinterprets the same algorithm family under a block size; `nb == 0`
    /// means unblocked. No-pivot variants have no blocked form and are
    /// returned unchanged.
    pub fn with_nb(self, nb: usize) -> VariantId {
        match self {
            VariantId::Nopiv(v) => VariantId::Nopiv(v),
            VariantId::Piv(v, _) => {
                if nb == 0 {
                    VariantId::Piv(v, Mode::Unblocked)
                } else {
                    VariantId::Piv(v, Mode::Blocked(nb))
                }
            }
        }
    }

    pub fn nb(&self) -> usize {
        match self {
            VariantId::Piv(_, Mode::Blocked(nb)) => *nb,
            _ => 0,
        }
    }

    /// Family name without the mode, as accepted by `--variant`.
    pub fn family(&self) -> String {
        match self {
            VariantId::Nopiv(v) => format!("nopiv{}", v.index()),
            VariantId::Piv(v, _) => format!("piv{}", v.label()),
        }
    }
}

impl fmt::Display for VariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariantId::Nopiv(_) => write!(f, "{}", self.family()),
            VariantId::Piv(_, Mode::Unblocked) => write!(f, "{}", self.family()),
            VariantId::Piv(_, Mode::Blocked(nb)) => write!(f, "{}:nb{}", self.family(), nb),
        }
    }
}

impl FromStr for VariantId {
    type Err = Error;

    /// Parses a family name (`nopiv1`..`nopiv5`, `piv3a`, `piv3b`, `piv4`,
    /// `piv5`), defaulting pivoted variants to unblocked.
    fn from_str(s: &str) -> Result<Self, Error> {
        let v = match s {
            "nopiv1" => VariantId::Nopiv(NopivVariant::V1),
            "nopiv2" => VariantId::Nopiv(NopivVariant::V2),
            "nopiv3" => VariantId::Nopiv(NopivVariant::V3),
            "nopiv4" => VariantId::Nopiv(NopivVariant::V4),
            "nopiv5" => VariantId::Nopiv(NopivVariant::V5),
            "piv3a" => VariantId::Piv(PivVariant::V3a, Mode::Unblocked),
            "piv3b" => VariantId::Piv(PivVariant::V3b, Mode::Unblocked),
            "piv4" => VariantId::Piv(PivVariant::V4, Mode::Unblocked),
            "piv5" => VariantId::Piv(PivVariant::V5, Mode::Unblocked),
            other => {
                return Err(Error::Domain(format!(
                    "unknown variant {other:?} (expected nopiv1..nopiv5, piv3a, piv3b, piv4, piv5)"
                )))
            }
        };
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for name in [
            "nopiv1", "nopiv2", "nopiv3", "nopiv4", "nopiv5", "piv3a", "piv3b", "piv4", "piv5",
        ] {
            let v: VariantId = name.parse().unwrap();
            assert_eq!(v.family(), name);
        }
        let blocked: VariantId = "piv3a".parse::<VariantId>().unwrap().with_nb(8);
        assert_eq!(blocked.to_string(), "piv3a:nb8");
        assert!("piv9".parse::<VariantId>().is_err());
    }
}
