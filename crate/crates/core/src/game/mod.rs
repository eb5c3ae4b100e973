//! Deterministic maze game with scripted and random agents.
//!
//! Version 1 has a single winning strategy (open the door). Version 2 adds a
//! coin behind a second rock; the single explosive can clear only one rock,
//! so each winning episode follows exactly one of the two strategies.

mod config;
mod corrupt;
mod world;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::GameConfig;
pub use corrupt::{corrupt, corrupt_sequences, CorruptOp, Corrupted};
pub use world::{Action, Dir, Item, Outcome, Pos, RawLog, RawMove};

use crate::error::{Error, Result};
use crate::labels::LabelTable;
use crate::sequence::EventSequence;
use world::{Target, World};

pub const EVENT_COUNT: usize = 12;

/// The event alphabet `e1..e12`.
pub fn event_universe() -> Arc<LabelTable> {
    Arc::new(LabelTable::events(EVENT_COUNT))
}

/// Scripted strategies; each fixes the order of the key, explosive, rock and goal steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// key, explosive, rock, door
    Door1,
    /// explosive, key, rock, door
    Door2,
    /// explosive, rock, key, door
    Door3,
    /// explosive, rock, coin; the key is never picked up
    Coin,
    /// key, explosive, rock, coin
    CoinKey1,
    /// explosive, key, rock, coin
    CoinKey2,
    /// explosive, rock, key, coin
    CoinKey3,
}

impl Route {
    pub const DOOR: [Route; 3] = [Route::Door1, Route::Door2, Route::Door3];
    pub const ALL: [Route; 7] =
        [Route::Door1, Route::Door2, Route::Door3, Route::Coin, Route::CoinKey1, Route::CoinKey2, Route::CoinKey3];

    pub fn is_coin(self) -> bool {
        !Route::DOOR.contains(&self)
    }

    pub fn name(self) -> &'static str {
        match self {
            Route::Door1 => "door-1",
            Route::Door2 => "door-2",
            Route::Door3 => "door-3",
            Route::Coin => "coin",
            Route::CoinKey1 => "coin-key-1",
            Route::CoinKey2 => "coin-key-2",
            Route::CoinKey3 => "coin-key-3",
        }
    }

    fn steps(self) -> Vec<Step> {
        use Step::*;
        let goal = if self.is_coin() { Item(world::Item::Coin) } else { Unlock };
        let rock = Blast(if self.is_coin() { Target::Item(world::Item::Coin) } else { Target::Door });
        let key = Item(world::Item::Key);
        let explosive = Item(world::Item::Explosive);
        match self {
            Route::Door1 | Route::CoinKey1 => vec![key, explosive, rock, goal],
            Route::Door2 | Route::CoinKey2 => vec![explosive, key, rock, goal],
            Route::Door3 | Route::CoinKey3 => vec![explosive, rock, key, goal],
            Route::Coin => vec![explosive, rock, goal],
        }
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidPolicy(format!("unknown route `{s}`")))
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Item(Item),
    /// Clear the rock in front of this target.
    Blast(Target),
    Unlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Uniformly random actions until a win or the step cap.
    Random,
    Scripted(Route),
    /// Cycles through every route available in the game version.
    ScriptedMixed,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Random => f.write_str("random"),
            Policy::Scripted(r) => write!(f, "scripted:{}", r.name()),
            Policy::ScriptedMixed => f.write_str("scripted-mixed"),
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    /// Accepts `random`, `scripted-mixed`, `scripted:ROUTE` and the shorthands
    /// `scripted` (= `scripted:door-1`) and `scripted:door` / `scripted:coin-key`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Policy::Random),
            "scripted-mixed" => Ok(Policy::ScriptedMixed),
            "scripted" | "scripted:door" => Ok(Policy::Scripted(Route::Door1)),
            "scripted:coin-key" => Ok(Policy::Scripted(Route::CoinKey1)),
            _ => match s.strip_prefix("scripted:") {
                Some(route) => Ok(Policy::Scripted(route.parse()?)),
                None => Err(Error::InvalidPolicy(format!("unknown policy `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WinRoute {
    Door,
    Coin,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Episode {
    pub events: EventSequence,
    pub label: u8,
    pub win_route: WinRoute,
    pub seed: u64,
    pub policy: String,
}

/// Serialized form of an [`Episode`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub events: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub win_route: Option<WinRoute>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
}

impl Episode {
    pub fn to_record(&self) -> EpisodeRecord {
        EpisodeRecord {
            events: self.events.labels().into_iter().map(String::from).collect(),
            label: Some(self.label),
            win_route: Some(self.win_route),
            seed: Some(self.seed),
            policy: Some(self.policy.clone()),
        }
    }

    pub fn is_win(&self) -> bool {
        self.label == 1
    }
}

/// Maps a raw move log to `e1..e12`.
pub fn extract_events(log: &RawLog, universe: &Arc<LabelTable>) -> EventSequence {
    let mut events = Vec::new();
    for m in &log.moves {
        let e = match m {
            RawMove::Collect(Item::Key) => 1,
            RawMove::Collect(Item::Explosive) => 2,
            RawMove::Collect(Item::Coin) => 11,
            RawMove::Blast(_) => 5,
            RawMove::Unlock => 6,
            RawMove::BlastFailed => 7,
            RawMove::UnlockFailed => 8,
            RawMove::Walk(_) | RawMove::Bump => continue,
        };
        events.push(e - 1);
    }
    if !log.key_collected {
        events.push(2);
    }
    if !log.explosive_collected {
        events.push(3);
    }
    events.push(match log.outcome {
        Outcome::DoorWin => 8,
        Outcome::TimedOut => 9,
        Outcome::CoinWin => 11,
    });
    EventSequence::from_positions(universe.clone(), events)
}

/// The route of episode `index` under [`Policy::ScriptedMixed`].
pub fn mixed_route(version: u8, index: usize) -> Route {
    if version == 1 {
        return Route::DOOR[index % 3];
    }
    // One of each route first, then a smooth weighted round robin; the
    // resulting 125-episode cycle has 74 door wins, 40 plain coin wins and
    // 11 coin wins that also pick up the key.
    const WEIGHTS: [i64; 7] = [24, 24, 23, 39, 3, 3, 2];
    const CYCLE: usize = 125;
    let k = index % CYCLE;
    if k < Route::ALL.len() {
        return Route::ALL[k];
    }
    let total: i64 = WEIGHTS.iter().sum();
    let mut current = [0i64; 7];
    let mut pick = 0;
    for _ in Route::ALL.len()..=k {
        for (c, w) in current.iter_mut().zip(WEIGHTS) {
            *c += w;
        }
        pick = (0..7).fold(0, |best, i| if current[i] > current[best] { i } else { best });
        current[pick] -= total;
    }
    Route::ALL[pick]
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of episode `index`, independent of how episodes are scheduled.
pub fn episode_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed.wrapping_add(index as u64))
}

pub fn simulate(config: &GameConfig, episodes: usize, policy: Policy, seed: u64) -> Result<Vec<Episode>> {
    if episodes == 0 {
        return Err(Error::InvalidParameter("at least one episode is required".into()));
    }
    simulate_range(config, 0..episodes, policy, seed)
}

/// Episodes with the given indices; episode `k` is the same as in any other
/// call with the same config, policy and seed.
pub fn simulate_range(
    config: &GameConfig,
    indices: std::ops::Range<usize>,
    policy: Policy,
    seed: u64,
) -> Result<Vec<Episode>> {
    config.validate()?;
    if let Policy::Scripted(route) = policy {
        if route.is_coin() && config.version == 1 {
            return Err(Error::InvalidPolicy(format!("route `{}` needs the coin of version 2", route.name())));
        }
    }
    let universe = event_universe();
    indices
        .into_par_iter()
        .map(|index| {
            let ep_seed = episode_seed(seed, index);
            let (log, label) = match policy {
                Policy::Random => play_random(config, ep_seed)?,
                Policy::Scripted(route) => (play_scripted(config, route, ep_seed)?, policy.to_string()),
                Policy::ScriptedMixed => {
                    let route = mixed_route(config.version, index);
                    (play_scripted(config, route, ep_seed)?, Policy::Scripted(route).to_string())
                }
            };
            let win_route = match log.outcome {
                Outcome::DoorWin => WinRoute::Door,
                Outcome::CoinWin => WinRoute::Coin,
                Outcome::TimedOut => WinRoute::None,
            };
            Ok(Episode {
                events: extract_events(&log, &universe),
                label: u8::from(win_route != WinRoute::None),
                win_route,
                seed: ep_seed,
                policy: label,
            })
        })
        .collect()
}

/// Plays one episode with the given raw actions; useful for tests and replays.
pub fn replay(config: &GameConfig, actions: &[Action]) -> Result<RawLog> {
    let mut world = World::new(config)?;
    for &a in actions.iter().take(config.step_cap) {
        if world.is_over() {
            break;
        }
        world.act(a);
    }
    Ok(world.finish(Outcome::TimedOut))
}

fn play_random(config: &GameConfig, seed: u64) -> Result<(RawLog, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = World::new(config)?;
    let actions = [
        Action::Move(Dir::Up),
        Action::Move(Dir::Down),
        Action::Move(Dir::Left),
        Action::Move(Dir::Right),
        Action::UseKey,
        Action::UseExplosive,
    ];
    for _ in 0..config.step_cap {
        if world.is_over() {
            break;
        }
        world.act(actions[rng.gen_range(0..actions.len())]);
    }
    Ok((world.finish(Outcome::TimedOut), Policy::Random.to_string()))
}

fn play_scripted(config: &GameConfig, route: Route, seed: u64) -> Result<RawLog> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = World::new(config)?;
    let steps = route.steps();
    let fail_key_before = rng.gen_bool(config.failed_key).then(|| rng.gen_range(0..steps.len()));
    let mut budget = config.step_cap;
    let mut wandered = 0;
    let mut act = |world: &mut World, a: Action| -> bool {
        if budget == 0 || world.is_over() {
            return false;
        }
        budget -= 1;
        world.act(a);
        true
    };

    for (k, &step) in steps.iter().enumerate() {
        if fail_key_before == Some(k) && !world.next_to_door() {
            act(&mut world, Action::UseKey);
        }
        let target = match step {
            Step::Item(item) => Target::Item(item),
            Step::Blast(behind) => match world.rock_guarding(behind) {
                Some(rock) => Target::Rock(rock),
                None => continue,
            },
            Step::Unlock => Target::Door,
        };
        while !world.at_target(target) {
            if wandered < config.max_wander && rng.gen_bool(config.wander) {
                let moves = world.safe_moves();
                if !moves.is_empty() {
                    wandered += 1;
                    let d = moves[rng.gen_range(0..moves.len())];
                    if !act(&mut world, Action::Move(d)) {
                        break;
                    }
                    continue;
                }
            }
            let Some(d) = world.route(target) else {
                return Err(Error::InvalidParameter(format!("map offers no path for route `{}`", route.name())));
            };
            if !act(&mut world, Action::Move(d)) {
                break;
            }
        }
        let finish = match step {
            Step::Blast(_) => Some(Action::UseExplosive),
            Step::Unlock => Some(Action::UseKey),
            Step::Item(_) => None,
        };
        if let Some(a) = finish {
            act(&mut world, a);
        }
    }
    Ok(world.finish(Outcome::TimedOut))
}
