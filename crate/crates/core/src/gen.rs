//! The generator universe shared by all theories.

use alloc::collections::BTreeSet;
use core::fmt;

/// An elementary morphism. Every theory draws its signature from this set;
/// the single generating object means arities are plain wire counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// Comultiplication, 1 → 2.
    Cop,
    /// Counit, 1 → 0.
    Cou,
    /// Multiplication, 2 → 1.
    Mul,
    /// Unit, 0 → 1.
    Unit,
    /// Antipode, 1 → 1.
    Ant,
    /// Inverse antipode, 1 → 1.
    AntInv,
    /// Braiding, 2 → 2.
    Br,
    /// Inverse braiding, 2 → 2.
    BrInv,
    /// Integral, 0 → 1.
    Intg,
    /// Cointegral, 1 → 0.
    Cointg,
    /// Ribbon morphism, 1 → 1.
    Rib,
    /// Inverse ribbon morphism, 1 → 1.
    RibInv,
    /// Copairing, 0 → 2.
    Cpr,
    /// Pairing, 2 → 0.
    Pr,
    /// Ribbon element, 0 → 1.
    Wp,
    /// Inverse ribbon element, 0 → 1.
    Wm,
}

impl Gen {
    pub const ALL: [Gen; 16] = [
        Gen::Cop,
        Gen::Cou,
        Gen::Mul,
        Gen::Unit,
        Gen::Ant,
        Gen::AntInv,
        Gen::Br,
        Gen::BrInv,
        Gen::Intg,
        Gen::Cointg,
        Gen::Rib,
        Gen::RibInv,
        Gen::Cpr,
        Gen::Pr,
        Gen::Wp,
        Gen::Wm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gen::Cop => "cop",
            Gen::Cou => "cou",
            Gen::Mul => "mul",
            Gen::Unit => "unit",
            Gen::Ant => "ant",
            Gen::AntInv => "ant_inv",
            Gen::Br => "br",
            Gen::BrInv => "br_inv",
            Gen::Intg => "intg",
            Gen::Cointg => "cointg",
            Gen::Rib => "rib",
            Gen::RibInv => "rib_inv",
            Gen::Cpr => "cpr",
            Gen::Pr => "pr",
            Gen::Wp => "wp",
            Gen::Wm => "wm",
        }
    }

    pub fn from_name(name: &str) -> Option<Gen> {
        Gen::ALL.iter().copied().find(|g| g.name() == name)
    }

    /// `(dom, cod)` in wires.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Gen::Cop => (1, 2),
            Gen::Cou => (1, 0),
            Gen::Mul => (2, 1),
            Gen::Unit => (0, 1),
            Gen::Ant | Gen::AntInv | Gen::Rib | Gen::RibInv => (1, 1),
            Gen::Br | Gen::BrInv => (2, 2),
            Gen::Intg => (0, 1),
            Gen::Cointg => (1, 0),
            Gen::Cpr => (0, 2),
            Gen::Pr => (2, 0),
            Gen::Wp | Gen::Wm => (0, 1),
        }
    }

    pub fn dom(self) -> usize {
        self.arity().0
    }

    pub fn cod(self) -> usize {
        self.arity().1
    }

    /// Short label used by renderers.
    pub fn symbol(self) -> &'static str {
        match self {
            Gen::Cop => "Δ",
            Gen::Cou => "ε",
            Gen::Mul => "m",
            Gen::Unit => "η",
            Gen::Ant => "S",
            Gen::AntInv => "S̄",
            Gen::Br => "γ",
            Gen::BrInv => "γ̄",
            Gen::Intg => "L",
            Gen::Cointg => "l",
            Gen::Rib => "v",
            Gen::RibInv => "v⁻¹",
            Gen::Cpr => "σ",
            Gen::Pr => "σ̄",
            Gen::Wp => "w₊",
            Gen::Wm => "w₋",
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The three theory presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoryName {
    /// Universal ribbon Hopf algebra.
    Hr,
    /// Its selfdual quotient.
    Hbb,
    /// The selfdual quotient with (r8), (r9) replaced by (q), (h10).
    HbbAlt,
    /// The algebra category with ribbon elements.
    AlgBar,
}

impl TheoryName {
    pub const ALL: [TheoryName; 4] = [
        TheoryName::Hr,
        TheoryName::Hbb,
        TheoryName::HbbAlt,
        TheoryName::AlgBar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoryName::Hr => "hr",
            TheoryName::Hbb => "hbb",
            TheoryName::HbbAlt => "hbb-alt",
            TheoryName::AlgBar => "algbar",
        }
    }

    pub fn parse(s: &str) -> Option<TheoryName> {
        match s.to_ascii_lowercase().as_str() {
            "hr" => Some(TheoryName::Hr),
            "hbb" => Some(TheoryName::Hbb),
            "hbb-alt" | "hbb_alt" => Some(TheoryName::HbbAlt),
            "algbar" | "alg-bar" => Some(TheoryName::AlgBar),
            _ => None,
        }
    }

    /// Generators of the theory's signature.
    pub fn generators(self) -> BTreeSet<Gen> {
        use Gen::*;
        let hopf = [Cop, Cou, Mul, Unit, Ant, AntInv, Br, BrInv];
        let mut set: BTreeSet<Gen> = hopf.into_iter().collect();
        match self {
            TheoryName::Hr | TheoryName::Hbb | TheoryName::HbbAlt => {
                set.extend([Intg, Cointg, Rib, RibInv, Cpr]);
            }
            TheoryName::AlgBar => {
                set.extend([Wp, Wm, Cpr, Pr]);
            }
        }
        set
    }
}

impl fmt::Display for TheoryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
