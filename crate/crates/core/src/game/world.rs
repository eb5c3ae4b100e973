//! Grid mechanics and the raw interaction log.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::config::GameConfig;
use crate::error::Result;

pub type Pos = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Item {
    Key,
    Explosive,
    Coin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Wall,
    Floor,
    Rock,
    Door,
    Item(Item),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dir {
    Up,
    Down,
    Left,
    Right,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Up, Dir::Down, Dir::Left, Dir::Right];

    fn apply(self, (r, c): Pos) -> Option<Pos> {
        Some(match self {
            Dir::Up => (r.checked_sub(1)?, c),
            Dir::Down => (r + 1, c),
            Dir::Left => (r, c.checked_sub(1)?),
            Dir::Right => (r, c + 1),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    Move(Dir),
    UseKey,
    UseExplosive,
}

/// One entry of the raw move log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RawMove {
    Walk(Pos),
    Bump,
    Collect(Item),
    Blast(Pos),
    BlastFailed,
    Unlock,
    UnlockFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    DoorWin,
    CoinWin,
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawLog {
    pub moves: Vec<RawMove>,
    pub key_collected: bool,
    pub explosive_collected: bool,
    pub outcome: Outcome,
}

/// What a scripted agent is currently heading for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target {
    Item(Item),
    Rock(Pos),
    Door,
}

#[derive(Debug, Clone)]
pub(crate) struct World {
    cells: Vec<Vec<Cell>>,
    pub(crate) pos: Pos,
    has_key: bool,
    has_explosive: bool,
    key_collected: bool,
    explosive_collected: bool,
    pub(crate) moves: Vec<RawMove>,
    pub(crate) outcome: Option<Outcome>,
}

impl World {
    pub(crate) fn new(config: &GameConfig) -> Result<Self> {
        config.validate()?;
        let mut pos = (0, 0);
        let cells = config
            .map
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.chars()
                    .enumerate()
                    .map(|(c, ch)| match ch {
                        '#' => Cell::Wall,
                        'R' => Cell::Rock,
                        'D' => Cell::Door,
                        'K' => Cell::Item(Item::Key),
                        'X' => Cell::Item(Item::Explosive),
                        'C' => Cell::Item(Item::Coin),
                        'P' => {
                            pos = (r, c);
                            Cell::Floor
                        }
                        _ => Cell::Floor,
                    })
                    .collect()
            })
            .collect();
        Ok(World {
            cells,
            pos,
            has_key: false,
            has_explosive: false,
            key_collected: false,
            explosive_collected: false,
            moves: Vec::new(),
            outcome: None,
        })
    }

    fn cell(&self, (r, c): Pos) -> Cell {
        self.cells.get(r).and_then(|row| row.get(c)).copied().unwrap_or(Cell::Wall)
    }

    fn neighbours(&self, p: Pos) -> impl Iterator<Item = (Dir, Pos)> + '_ {
        Dir::ALL.into_iter().filter_map(move |d| d.apply(p).map(|q| (d, q)))
    }

    fn adjacent(&self, cell: Cell) -> Option<Pos> {
        self.neighbours(self.pos).map(|(_, q)| q).find(|&q| self.cell(q) == cell)
    }

    pub(crate) fn rocks(&self) -> Vec<Pos> {
        let mut out = Vec::new();
        for (r, row) in self.cells.iter().enumerate() {
            for (c, &cell) in row.iter().enumerate() {
                if cell == Cell::Rock {
                    out.push((r, c));
                }
            }
        }
        out
    }

    pub(crate) fn find(&self, item: Item) -> Option<Pos> {
        (0..self.cells.len())
            .flat_map(|r| (0..self.cells[r].len()).map(move |c| (r, c)))
            .find(|&p| self.cell(p) == Cell::Item(item))
    }

    pub(crate) fn is_over(&self) -> bool {
        self.outcome.is_some()
    }

    pub(crate) fn holds(&self, item: Item) -> bool {
        match item {
            Item::Key => self.has_key,
            Item::Explosive => self.has_explosive,
            Item::Coin => false,
        }
    }

    pub(crate) fn next_to_door(&self) -> bool {
        self.adjacent(Cell::Door).is_some()
    }

    pub(crate) fn act(&mut self, action: Action) {
        debug_assert!(!self.is_over());
        match action {
            Action::Move(d) => match d.apply(self.pos).map(|q| (q, self.cell(q))) {
                Some((q, Cell::Floor)) => {
                    self.pos = q;
                    self.moves.push(RawMove::Walk(q));
                }
                Some((q, Cell::Item(item))) => {
                    self.pos = q;
                    self.cells[q.0][q.1] = Cell::Floor;
                    self.moves.push(RawMove::Walk(q));
                    self.moves.push(RawMove::Collect(item));
                    match item {
                        Item::Key => (self.has_key, self.key_collected) = (true, true),
                        Item::Explosive => (self.has_explosive, self.explosive_collected) = (true, true),
                        Item::Coin => self.outcome = Some(Outcome::CoinWin),
                    }
                }
                _ => self.moves.push(RawMove::Bump),
            },
            Action::UseExplosive => match self.adjacent(Cell::Rock) {
                Some(rock) if self.has_explosive => {
                    self.cells[rock.0][rock.1] = Cell::Floor;
                    self.has_explosive = false;
                    self.moves.push(RawMove::Blast(rock));
                }
                _ => self.moves.push(RawMove::BlastFailed),
            },
            Action::UseKey => {
                if self.has_key && self.next_to_door() {
                    self.moves.push(RawMove::Unlock);
                    self.outcome = Some(Outcome::DoorWin);
                } else {
                    self.moves.push(RawMove::UnlockFailed);
                }
            }
        }
    }

    pub(crate) fn finish(self, outcome_if_open: Outcome) -> RawLog {
        RawLog {
            moves: self.moves,
            key_collected: self.key_collected,
            explosive_collected: self.explosive_collected,
            outcome: self.outcome.unwrap_or(outcome_if_open),
        }
    }

    fn passable(&self, p: Pos, target: Target) -> bool {
        match self.cell(p) {
            Cell::Floor => true,
            Cell::Item(item) => target == Target::Item(item),
            _ => false,
        }
    }

    pub(crate) fn at_target(&self, target: Target) -> bool {
        match target {
            Target::Item(item) => self.holds(item) || self.find(item).is_none(),
            Target::Rock(rock) => self.neighbours(self.pos).any(|(_, q)| q == rock),
            Target::Door => self.next_to_door(),
        }
    }

    /// Breadth-first search towards `target` that steps on no other item.
    /// `Some(None)` means the agent is already there.
    fn bfs(&self, target: Target) -> Option<Option<Dir>> {
        let goal = |p: Pos| match target {
            Target::Item(item) => self.cell(p) == Cell::Item(item),
            Target::Rock(rock) => self.neighbours(p).any(|(_, q)| q == rock),
            Target::Door => self.neighbours(p).any(|(_, q)| self.cell(q) == Cell::Door),
        };
        let mut first: HashMap<Pos, Option<Dir>> = HashMap::new();
        first.insert(self.pos, None);
        let mut queue = VecDeque::from([self.pos]);
        while let Some(p) = queue.pop_front() {
            if goal(p) {
                return Some(first[&p]);
            }
            for (d, q) in self.neighbours(p) {
                if self.passable(q, target) && !first.contains_key(&q) {
                    first.insert(q, first[&p].or(Some(d)));
                    queue.push_back(q);
                }
            }
        }
        None
    }

    /// First move of a shortest path to `target`.
    pub(crate) fn route(&self, target: Target) -> Option<Dir> {
        self.bfs(target).flatten()
    }

    pub(crate) fn reachable(&self, target: Target) -> bool {
        self.bfs(target).is_some()
    }

    /// Moves that land on bare floor.
    pub(crate) fn safe_moves(&self) -> Vec<Dir> {
        self.neighbours(self.pos).filter(|&(_, q)| self.cell(q) == Cell::Floor).map(|(d, _)| d).collect()
    }

    /// The rock whose removal opens a path to `target`, if a rock is in the way.
    pub(crate) fn rock_guarding(&self, target: Target) -> Option<Pos> {
        // Other items would be collected on the way; ignore them so only rocks decide.
        let mut clear = self.clone();
        for cell in clear.cells.iter_mut().flatten() {
            if matches!(cell, Cell::Item(i) if Target::Item(*i) != target) {
                *cell = Cell::Floor;
            }
        }
        if clear.reachable(target) {
            return None;
        }
        self.rocks().into_iter().find(|&(r, c)| {
            let mut opened = clear.clone();
            opened.cells[r][c] = Cell::Floor;
            opened.reachable(target)
        })
    }
}
