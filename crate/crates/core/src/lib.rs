//! Misère Partizan Arc Kayles, bounded two-player constraint logic and the
//! gadget reductions between them.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod arck;
pub mod arck_compile;
mod bits;
pub mod cl;
pub mod cl_compile;
pub mod gadgets;
pub mod graph;
pub mod poscnf;
pub mod verify;

use graph::EdgeColour;

/// Blue is the Left player, Red the Right player.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Blue,
    Red,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Blue => Player::Red,
            Player::Red => Player::Blue,
        }
    }

    pub fn colour(self) -> EdgeColour {
        match self {
            Player::Blue => EdgeColour::Blue,
            Player::Red => EdgeColour::Red,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Blue => "blue",
            Player::Red => "red",
        })
    }
}
