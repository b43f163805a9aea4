use std::io::BufRead;
use std::sync::OnceLock;

use crate::error::{Result, SimError};
use crate::radio::grant::MAX_ITBS;

/// Largest PRB allocation covered by the shipped table.
pub const MAX_TABLE_PRB: u32 = 25;

const SHIPPED: &str = include_str!("../../data/tbs_36213.txt");

/// Transport block size lookup, bits per TTI indexed by (I_TBS, N_PRB).
#[derive(Clone, Debug, PartialEq)]
pub struct TbsTable {
    max_prb: u32,
    /// Row-major, `(MAX_ITBS + 1) * max_prb` entries.
    bits: Vec<u32>,
}

impl TbsTable {
    /// The table shipped with the crate, parsed and validated once.
    pub fn standard() -> &'static TbsTable {
        static TABLE: OnceLock<TbsTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            TbsTable::parse(SHIPPED.as_bytes()).expect("shipped TBS table must be valid")
        })
    }

    /// Parses `i_tbs n_prb bits` records; `#` starts a comment. The result
    /// is validated before it is returned.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut records = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let parse_err = |msg: &str| SimError::Parse {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err("expected `i_tbs n_prb bits`"));
            }
            let nums: Vec<u32> = fields
                .iter()
                .map(|f| f.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(&e.to_string()))?;
            records.push((idx + 1, nums[0], nums[1], nums[2]));
        }
        let max_prb = records.iter().map(|r| r.2).max().unwrap_or(0);
        if max_prb == 0 {
            return Err(SimError::TbsTable("table is empty".into()));
        }
        let rows = MAX_ITBS as usize + 1;
        let mut bits = vec![0u32; rows * max_prb as usize];
        for (line, itbs, prb, value) in records {
            if itbs > MAX_ITBS as u32 || prb == 0 {
                return Err(SimError::Parse {
                    line,
                    msg: format!("index out of range: i_tbs={itbs} n_prb={prb}"),
                });
            }
            let slot = &mut bits[itbs as usize * max_prb as usize + (prb - 1) as usize];
            if *slot != 0 {
                return Err(SimError::Parse {
                    line,
                    msg: format!("duplicate entry for i_tbs={itbs} n_prb={prb}"),
                });
            }
            *slot = value;
        }
        let table = Self { max_prb, bits };
        table.validate()?;
        Ok(table)
    }

    pub fn max_prb(&self) -> u32 {
        self.max_prb
    }

    fn at(&self, itbs: u8, prb: u32) -> u32 {
        self.bits[itbs as usize * self.max_prb as usize + (prb - 1) as usize]
    }

    /// Every entry positive and the table non-decreasing along both axes.
    pub fn validate(&self) -> Result<()> {
        for itbs in 0..=MAX_ITBS {
            for prb in 1..=self.max_prb {
                let v = self.at(itbs, prb);
                if v == 0 {
                    return Err(SimError::TbsTable(format!(
                        "missing or zero entry i_tbs={itbs} n_prb={prb}"
                    )));
                }
                if prb > 1 && v < self.at(itbs, prb - 1) {
                    return Err(SimError::TbsTable(format!(
                        "decreasing in n_prb at i_tbs={itbs} n_prb={prb}"
                    )));
                }
                if itbs > 0 && v < self.at(itbs - 1, prb) {
                    return Err(SimError::TbsTable(format!(
                        "decreasing in i_tbs at i_tbs={itbs} n_prb={prb}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Bits carried by one TTI; zero PRBs carry nothing.
    pub fn bits(&self, itbs: u8, n_prb: u32) -> Result<u32> {
        if itbs > MAX_ITBS {
            return Err(SimError::Range(format!("i_tbs {itbs} outside 0..={MAX_ITBS}")));
        }
        if n_prb == 0 {
            return Ok(0);
        }
        if n_prb > self.max_prb {
            return Err(SimError::Range(format!(
                "n_prb {n_prb} outside 1..={}",
                self.max_prb
            )));
        }
        Ok(self.at(itbs, n_prb))
    }
}

/// Lookup in the shipped table.
pub fn tbs_bits(itbs: u8, n_prb: u32) -> Result<u32> {
    TbsTable::standard().bits(itbs, n_prb)
}
