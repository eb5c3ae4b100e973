use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Map legend: `#` wall, `.` floor, `P` start, `K` key, `X` explosive,
/// `R` rock, `D` door, `C` coin.
const V1_MAP: [&str; 7] = [
    "###########",
    "#K...P...X#",
    "#.........#",
    "#######R###",
    "#######.###",
    "#######D###",
    "###########",
];

const V2_MAP: [&str; 7] = [
    "###########",
    "#K...P...X#",
    "#.........#",
    "###R###R###",
    "###C###.###",
    "#######D###",
    "###########",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub version: u8,
    pub map: Vec<String>,
    /// Episodes end as a loss after this many actions.
    pub step_cap: usize,
    /// Per-step probability that a scripted agent makes a detour move.
    pub wander: f64,
    /// Upper bound on detour moves in one scripted episode.
    pub max_wander: usize,
    /// Probability that a scripted episode contains one failed key use.
    pub failed_key: f64,
}

impl GameConfig {
    pub fn v1() -> Self {
        GameConfig {
            version: 1,
            map: V1_MAP.iter().map(|r| r.to_string()).collect(),
            step_cap: 200,
            wander: 0.1,
            max_wander: 8,
            failed_key: 0.2,
        }
    }

    pub fn v2() -> Self {
        GameConfig { version: 2, map: V2_MAP.iter().map(|r| r.to_string()).collect(), ..Self::v1() }
    }

    pub fn preset(version: u8) -> Result<Self> {
        match version {
            1 => Ok(Self::v1()),
            2 => Ok(Self::v2()),
            v => Err(Error::InvalidParameter(format!("unknown game version {v}"))),
        }
    }

    pub fn with_step_cap(mut self, cap: usize) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let count = |ch: char| self.map.iter().flat_map(|r| r.chars()).filter(|&c| c == ch).count();
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let width = self.map.first().map_or(0, |r| r.len());
        if width == 0 || self.map.iter().any(|r| r.len() != width) {
            return bad("map rows must be nonempty and of equal width".into());
        }
        if let Some(c) = self.map.iter().flat_map(|r| r.chars()).find(|c| !"#.PKXRDC".contains(*c)) {
            return bad(format!("unknown map cell `{c}`"));
        }
        for ch in ['P', 'K', 'X', 'D'] {
            if count(ch) != 1 {
                return bad(format!("map needs exactly one `{ch}`"));
            }
        }
        let (rocks, coins) = match self.version {
            1 => (1, 0),
            2 => (2, 1),
            v => return bad(format!("unknown game version {v}")),
        };
        if count('R') != rocks || count('C') != coins {
            return bad(format!("version {} needs {rocks} rock(s) and {coins} coin(s)", self.version));
        }
        if !(0.0..=1.0).contains(&self.wander) || !(0.0..=1.0).contains(&self.failed_key) {
            return bad("probabilities must lie in [0, 1]".into());
        }
        Ok(())
    }
}
