use std::fmt;

/// A transformation: positive reduction, success, negative reduction,
/// failure, loop detection, magic reduction, restricted magic reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    P,
    S,
    N,
    F,
    L,
    M,
    R,
}

impl Letter {
    pub const ALL: [Letter; 7] = [Letter::P, Letter::S, Letter::N, Letter::F, Letter::L, Letter::M, Letter::R];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            'P' => Letter::P,
            'S' => Letter::S,
            'N' => Letter::N,
            'F' => Letter::F,
            'L' => Letter::L,
            'M' => Letter::M,
            'R' => Letter::R,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        b"PSNFLMR"[self.index()] as char
    }

    pub fn is_magic(self) -> bool {
        matches!(self, Letter::M | Letter::R)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}
