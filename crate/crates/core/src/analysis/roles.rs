use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexity::{utterance_complexity, ComplexityConfig};
use crate::corpus::{Corpus, Role, RoleMode};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleStats {
    pub utterances: usize,
    pub mean_complexity: f64,
}

/// Mean utterance complexity per speaker role. Roles that never speak are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleComplexityTable {
    pub domain: String,
    pub roles: BTreeMap<Role, RoleStats>,
}

impl RoleComplexityTable {
    pub fn mean(&self, role: Role) -> Option<f64> {
        self.roles.get(&role).map(|s| s.mean_complexity)
    }
}

pub fn role_complexity(corpus: &Corpus, lexicon: &Lexicon, config: &ComplexityConfig) -> Result<RoleComplexityTable> {
    if corpus.role_mode() != RoleMode::TwoRole {
        return Err(Error::NotTwoRole);
    }
    let mut acc: BTreeMap<Role, (usize, f64)> = BTreeMap::new();
    for u in corpus.dialogs().iter().flat_map(|d| d.utterances()) {
        let e = acc.entry(u.role).or_default();
        e.0 += 1;
        e.1 += utterance_complexity(u, lexicon, config);
    }
    Ok(RoleComplexityTable {
        domain: corpus.domain().to_string(),
        roles: acc
            .into_iter()
            .map(|(role, (n, sum))| {
                (
                    role,
                    RoleStats {
                        utterances: n,
                        mean_complexity: sum / n as f64,
                    },
                )
            })
            .collect(),
    })
}
