use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{Formula, Modality, Node};

/// Logic fragments: hybrid ones named by their extension letters, plus
/// first-order and monadic second-order logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fragment {
    H,
    HB,
    HG,
    HBG,
    HS,
    HBS,
    HGS,
    HBGS,
    FO,
    MSO,
}

impl Fragment {
    pub const ALL: [Fragment; 10] = [
        Fragment::H,
        Fragment::HB,
        Fragment::HG,
        Fragment::HBG,
        Fragment::HS,
        Fragment::HBS,
        Fragment::HGS,
        Fragment::HBGS,
        Fragment::FO,
        Fragment::MSO,
    ];

    pub fn is_hybrid(self) -> bool {
        !matches!(self, Fragment::FO | Fragment::MSO)
    }

    pub fn backward(self) -> bool {
        matches!(self, Fragment::HB | Fragment::HBG | Fragment::HBS | Fragment::HBGS)
    }

    pub fn global(self) -> bool {
        matches!(self, Fragment::HG | Fragment::HBG | Fragment::HGS | Fragment::HBGS)
    }

    pub fn sets(self) -> bool {
        matches!(self, Fragment::HS | Fragment::HBS | Fragment::HGS | Fragment::HBGS | Fragment::MSO)
    }

    fn from_letters(hybrid: bool, b: bool, g: bool, s: bool) -> Fragment {
        match (hybrid, b, g, s) {
            (false, _, _, false) => Fragment::FO,
            (false, _, _, true) => Fragment::MSO,
            (true, false, false, false) => Fragment::H,
            (true, true, false, false) => Fragment::HB,
            (true, false, true, false) => Fragment::HG,
            (true, true, true, false) => Fragment::HBG,
            (true, false, false, true) => Fragment::HS,
            (true, true, false, true) => Fragment::HBS,
            (true, false, true, true) => Fragment::HGS,
            (true, true, true, true) => Fragment::HBGS,
        }
    }

    /// The set-quantifier-free fragment underneath.
    pub fn kernel(self) -> Fragment {
        Fragment::from_letters(self.is_hybrid(), self.backward(), self.global(), false)
    }

    pub fn with_sets(self) -> Fragment {
        Fragment::from_letters(self.is_hybrid(), self.backward(), self.global(), true)
    }

    /// Letter inclusion; hybrid fragments and FO/MSO are incomparable.
    pub fn le(self, other: Fragment) -> bool {
        self.is_hybrid() == other.is_hybrid()
            && (!self.backward() || other.backward())
            && (!self.global() || other.global())
            && (!self.sets() || other.sets())
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Fragment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fragment::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown fragment `{s}`"))
    }
}

/// Whether `f` is generated by the grammar of fragment `frag`.
pub fn in_fragment(f: &Formula, frag: Fragment) -> bool {
    fn go(f: &Formula, frag: Fragment, memo: &mut HashMap<usize, bool>) -> bool {
        if let Some(&v) = memo.get(&f.id()) {
            return v;
        }
        let here = match f.node() {
            Node::Nominal(_) | Node::SetAtom(_) => frag.is_hybrid(),
            Node::Eq(..) | Node::SetApp(..) | Node::RelApp(..) | Node::ExistsElem(..) => !frag.is_hybrid(),
            Node::Not(_) | Node::Or(..) => true,
            Node::Diamond(m, _) => {
                frag.is_hybrid()
                    && match m {
                        Modality::Rel(_) => true,
                        Modality::Inv(_) => frag.backward(),
                        Modality::Global => frag.global(),
                    }
            }
            Node::ExistsSet(..) => frag.sets(),
        };
        let v = here && f.children().into_iter().all(|c| go(c, frag, memo));
        memo.insert(f.id(), v);
        v
    }
    go(f, frag, &mut HashMap::new())
}
