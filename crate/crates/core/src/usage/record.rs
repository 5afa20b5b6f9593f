use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::classfile::MemberRef;
use crate::corpus::Gav;

/// One client's summed references to one type (member absent) or one
/// member of a library's surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UsageRecord {
    pub client: Gav,
    pub library: Gav,
    pub type_name: String,
    pub member: Option<MemberRef>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid usage record {line:?}: {reason}")]
pub struct InvalidRecord {
    pub line: String,
    pub reason: String,
}

/// `client<TAB>library<TAB>type<TAB>member_or_-<TAB>count`
impl fmt::Display for UsageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t", self.client, self.library, self.type_name)?;
        match &self.member {
            Some(m) => write!(f, "{m}")?,
            None => f.write_str("-")?,
        }
        write!(f, "\t{}", self.count)
    }
}

impl FromStr for UsageRecord {
    type Err = InvalidRecord;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| InvalidRecord {
            line: line.to_owned(),
            reason: reason.to_owned(),
        };
        let cols: Vec<&str> = line.split('\t').collect();
        let [client, library, type_name, member, count] = cols[..] else {
            return Err(bad("expected 5 tab-separated columns"));
        };
        let member = match member {
            "-" => None,
            m => Some(m.parse().map_err(|_| bad("bad member"))?),
        };
        let count: u64 = count.parse().map_err(|_| bad("bad count"))?;
        if count == 0 {
            return Err(bad("count must be positive"));
        }
        Ok(UsageRecord {
            client: client.parse().map_err(|_| bad("bad client coordinates"))?,
            library: library
                .parse()
                .map_err(|_| bad("bad library coordinates"))?,
            type_name: type_name.to_owned(),
            member,
            count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        for line in [
            "org.apache.flink:flink-runtime:1.5.0\torg.slf4j:slf4j-api:1.7.21\torg/slf4j/Logger\tinfo(Ljava/lang/String;)V\t6",
            "a:b:1\tc:d:2\tc/D\t-\t1",
            "a:b:1\tc:d:2\tc/D\tLOG:Lc/D;\t3",
        ] {
            let r: UsageRecord = line.parse().unwrap();
            assert_eq!(r.to_string(), line);
        }
        assert!("a:b:1\tc:d:2\tc/D\t-\t0".parse::<UsageRecord>().is_err());
        assert!("a:b:1\tc:d:2\tc/D\t-".parse::<UsageRecord>().is_err());
    }
}
