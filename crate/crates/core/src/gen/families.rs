use std::fmt::{self, Write};
use std::str::FromStr;

use crate::model::Program;
use crate::parser::{parse_program, parse_query, Query};

const RULES: &str = "p(X) :- t(X,Y,Z), not p(Y), not p(Z).\np(X) :- p0(X).\n";

/// Benchmark families over the chain `t(a,a,b1), t(b1,c1,b2), …,
/// t(bn,cn,bn+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Chain with `p0(c2)`.
    ExA5,
    /// Chain with `p0(c_{n/4})`.
    ExA71,
    /// As `ExA71` plus `p(X) :- p(X)`.
    ExA5Loop,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::ExA5, Family::ExA71, Family::ExA5Loop];

    pub fn name(self) -> &'static str {
        match self {
            Family::ExA5 => "exA5",
            Family::ExA71 => "exA71",
            Family::ExA5Loop => "exA5loop",
        }
    }

    pub fn text(self, n: usize) -> String {
        let mut s = String::from(RULES);
        if self == Family::ExA5Loop {
            s.push_str("p(X) :- p(X).\n");
        }
        let seed = match self {
            Family::ExA5 => 2,
            _ => n / 4,
        };
        writeln!(s, "p0(c{seed}).").unwrap();
        s.push_str("t(a,a,b1).\n");
        for i in 1..=n {
            writeln!(s, "t(b{i},c{i},b{}).", i + 1).unwrap();
        }
        s
    }

    pub fn instance(self, n: usize) -> Instance {
        let text = self.text(n);
        let program = parse_program(&text).expect("family text parses");
        let query = parse_query("?- p(a).").expect("query parses");
        Instance { family: self, n, text, program, query }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A family member with its query `p(a)`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub n: usize,
    pub text: String,
    pub program: Program,
    pub query: Query,
}
