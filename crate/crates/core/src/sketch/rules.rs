use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SketchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Test {
    True,
    False,
    Zero,
    Positive,
}

/// A feature test in a rule condition, e.g. `N>0` or `!H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    pub feature: String,
    pub test: Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Change {
    SetTrue,
    SetFalse,
    Decrease,
    Increase,
    Any,
}

/// A required feature change, e.g. `N-` (decrease), `N?` (released) or `H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Effect {
    pub feature: String,
    pub change: Change,
}

impl Test {
    pub fn holds(self, v: u32) -> bool {
        match self {
            Test::True | Test::Positive => v > 0,
            Test::False | Test::Zero => v == 0,
        }
    }
}

impl Change {
    pub fn holds(self, before: u32, after: u32) -> bool {
        match self {
            Change::SetTrue => after > 0,
            Change::SetFalse => after == 0,
            Change::Decrease => after < before,
            Change::Increase => after > before,
            Change::Any => true,
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

impl FromStr for Condition {
    type Err = SketchError;
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        let (feature, test) = if let Some(f) = s.strip_suffix(">0") {
            (f, Test::Positive)
        } else if let Some(f) = s.strip_suffix("=0") {
            (f, Test::Zero)
        } else if let Some(f) = s.strip_prefix('!').or_else(|| s.strip_prefix('¬')) {
            (f, Test::False)
        } else {
            (s, Test::True)
        };
        let feature = feature.trim();
        if !is_ident(feature) {
            return Err(SketchError::BadRule(format!("cannot parse condition `{raw}`")));
        }
        Ok(Condition {
            feature: feature.to_string(),
            test,
        })
    }
}

impl FromStr for Effect {
    type Err = SketchError;
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        let (feature, change) = if let Some(f) = s.strip_suffix('-').or_else(|| s.strip_suffix('↓')) {
            (f, Change::Decrease)
        } else if let Some(f) = s.strip_suffix('+').or_else(|| s.strip_suffix('↑')) {
            (f, Change::Increase)
        } else if let Some(f) = s.strip_suffix('?') {
            (f, Change::Any)
        } else if let Some(f) = s.strip_prefix('!').or_else(|| s.strip_prefix('¬')) {
            (f, Change::SetFalse)
        } else {
            (s, Change::SetTrue)
        };
        let feature = feature.trim();
        if !is_ident(feature) {
            return Err(SketchError::BadRule(format!("cannot parse effect `{raw}`")));
        }
        Ok(Effect {
            feature: feature.to_string(),
            change,
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.test {
            Test::True => write!(f, "{}", self.feature),
            Test::False => write!(f, "!{}", self.feature),
            Test::Zero => write!(f, "{}=0", self.feature),
            Test::Positive => write!(f, "{}>0", self.feature),
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.change {
            Change::SetTrue => write!(f, "{}", self.feature),
            Change::SetFalse => write!(f, "!{}", self.feature),
            Change::Decrease => write!(f, "{}-", self.feature),
            Change::Increase => write!(f, "{}+", self.feature),
            Change::Any => write!(f, "{}?", self.feature),
        }
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
                ser.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
                let s = String::deserialize(de)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Condition);
string_serde!(Effect);

/// A sketch rule `C -> E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchRule {
    pub conditions: Vec<Condition>,
    pub effects: Vec<Effect>,
}

impl SketchRule {
    pub fn new(conditions: &[&str], effects: &[&str]) -> Result<Self, SketchError> {
        Ok(SketchRule {
            conditions: conditions.iter().map(|c| c.parse()).collect::<Result<_, _>>()?,
            effects: effects.iter().map(|e| e.parse()).collect::<Result<_, _>>()?,
        })
    }
}

impl fmt::Display for SketchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.conditions.iter().map(ToString::to_string).collect();
        let e: Vec<String> = self.effects.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}} -> {{{}}}", c.join(", "), e.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["N>0", "N=0", "H", "!H"] {
            assert_eq!(s.parse::<Condition>().unwrap().to_string(), s);
        }
        for s in ["N-", "N+", "N?", "H", "!H"] {
            assert_eq!(s.parse::<Effect>().unwrap().to_string(), s);
        }
        assert_eq!("N↓".parse::<Effect>().unwrap().change, Change::Decrease);
        assert_eq!("¬H".parse::<Condition>().unwrap().test, Test::False);
        assert!("N>>0".parse::<Condition>().is_err());
    }
}
