//! Set-quantifier alternation levels over a quantifier-free kernel.
//!
//! Levels are computed bottom-up. Besides prenex blocks, Boolean
//! combinations of `Σℓ` formulas count as `Σℓ` (their quantifier blocks
//! can be merged after renaming), and `Σℓ ⊆ Πℓ₊₁`, `Πℓ ⊆ Σℓ₊₁` hold via
//! empty blocks.

use std::collections::HashMap;

use thiserror::Error;

use super::{Formula, Fragment, Modality, Node};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("kernel fragment {0} is not quantifier-free")]
    InvalidKernel(Fragment),
}

/// Least `Σ` and `Π` levels; `None` when the formula is in no level
/// (for instance a set quantifier below a modality).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Levels {
    pub sigma: Option<usize>,
    pub pi: Option<usize>,
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

fn max_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    Some(a?.max(b?))
}

fn check_kernel(kernel: Fragment) -> Result<(), ClassifyError> {
    if kernel.sets() {
        Err(ClassifyError::InvalidKernel(kernel))
    } else {
        Ok(())
    }
}

fn local_in_kernel(f: &Formula, kernel: Fragment) -> bool {
    match f.node() {
        Node::Nominal(_) | Node::SetAtom(_) => kernel.is_hybrid(),
        Node::Eq(..) | Node::SetApp(..) | Node::RelApp(..) | Node::ExistsElem(..) => !kernel.is_hybrid(),
        Node::Not(_) | Node::Or(..) => true,
        Node::Diamond(m, _) => {
            kernel.is_hybrid()
                && match m {
                    Modality::Rel(_) => true,
                    Modality::Inv(_) => kernel.backward(),
                    Modality::Global => kernel.global(),
                }
        }
        Node::ExistsSet(..) => false,
    }
}

#[derive(Clone, Copy)]
struct Info {
    kernel: bool,
    levels: Levels,
}

struct Classifier {
    kernel: Fragment,
    memo: HashMap<usize, Info>,
}

impl Classifier {
    fn info(&mut self, f: &Formula) -> Info {
        if let Some(&i) = self.memo.get(&f.id()) {
            return i;
        }
        let children: Vec<Info> = f.children().into_iter().map(|c| self.info(c)).collect();
        let kernel = local_in_kernel(f, self.kernel) && children.iter().all(|c| c.kernel);
        let levels = if kernel {
            Levels { sigma: Some(0), pi: Some(0) }
        } else {
            let (s, p) = match f.node() {
                Node::Not(_) => {
                    let c = children[0].levels;
                    (min_opt(c.sigma.map(|s| s + 1), c.pi), c.sigma)
                }
                Node::Or(..) => {
                    let (a, b) = (children[0].levels, children[1].levels);
                    (max_opt(a.sigma, b.sigma), max_opt(a.pi, b.pi))
                }
                Node::ExistsSet(..) => {
                    let s = children[0].levels.sigma.map(|s| s.max(1));
                    (s, s.map(|s| s + 1))
                }
                _ => (None, None),
            };
            Levels { sigma: min_opt(s, p.map(|p| p + 1)), pi: min_opt(p, s.map(|s| s + 1)) }
        };
        let info = Info { kernel, levels };
        self.memo.insert(f.id(), info);
        info
    }
}

pub fn levels(f: &Formula, kernel: Fragment) -> Result<Levels, ClassifyError> {
    check_kernel(kernel)?;
    Ok(Classifier { kernel, memo: HashMap::new() }.info(f).levels)
}

/// Least `ℓ` with `f ∈ Σℓ(kernel)`.
pub fn sigma_level(f: &Formula, kernel: Fragment) -> Result<Option<usize>, ClassifyError> {
    Ok(levels(f, kernel)?.sigma)
}

/// Least `ℓ` with `f ∈ Πℓ(kernel)`.
pub fn pi_level(f: &Formula, kernel: Fragment) -> Result<Option<usize>, ClassifyError> {
    Ok(levels(f, kernel)?.pi)
}

/// Least `ℓ` such that `f` is a Boolean combination of kernel formulas and
/// quantifier-headed `Σℓ`/`Πℓ` formulas.
pub fn bc_sigma_level(f: &Formula, kernel: Fragment) -> Result<Option<usize>, ClassifyError> {
    check_kernel(kernel)?;
    let mut c = Classifier { kernel, memo: HashMap::new() };
    fn go(f: &Formula, c: &mut Classifier) -> Option<usize> {
        let info = c.info(f);
        if info.kernel {
            return Some(0);
        }
        match f.node() {
            Node::Not(a) => go(a, c),
            Node::Or(a, b) => Some(go(a, c)?.max(go(b, c)?)),
            Node::ExistsSet(..) => min_opt(info.levels.sigma, info.levels.pi),
            _ => None,
        }
    }
    Ok(go(f, &mut c))
}

fn boxed_body(f: &Formula) -> Option<&Formula> {
    let Node::Not(inner) = f.node() else { return None };
    let Node::Diamond(Modality::Global, args) = inner.node() else { return None };
    let Node::Not(body) = args[0].node() else { return None };
    Some(body)
}

/// Level of `□•ψ` with `ψ ∈ Σℓ(H)`.
pub fn boxed_sigma_level(f: &Formula) -> Option<usize> {
    sigma_level(boxed_body(f)?, Fragment::H).expect("H is a kernel")
}

/// Level of `□•ψ` with `ψ ∈ Πℓ(H)`.
pub fn boxed_pi_level(f: &Formula) -> Option<usize> {
    pi_level(boxed_body(f)?, Fragment::H).expect("H is a kernel")
}
