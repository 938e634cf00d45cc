//! Binary transcript of a delivery phase.
//!
//! Layout (little endian): magic `MACT`, version `u8`, mode `u8`
//! (0 plain, 1 mds), `S`, `F`, `K` as `u32`, field id `u8` (0 none,
//! 1 GF(2^16)), symbol count `u32`, then each symbol as a `u32` length
//! followed by its bytes.

use super::Mode;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"MACT";
const VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub mode: Mode,
    pub s: u32,
    pub f: u32,
    pub k: u32,
    pub field: u8,
    pub symbols: Vec<Vec<u8>>,
}

impl Transcript {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(match self.mode {
            Mode::Plain => 0,
            Mode::Mds => 1,
        });
        for v in [self.s, self.f, self.k] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(self.field);
        out.extend_from_slice(&(self.symbols.len() as u32).to_le_bytes());
        for sym in &self.symbols {
            out.extend_from_slice(&(sym.len() as u32).to_le_bytes());
            out.extend_from_slice(sym);
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Parse("not a transcript (bad magic)".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Parse(format!("unknown transcript version {version}")));
        }
        let mode = match r.u8()? {
            0 => Mode::Plain,
            1 => Mode::Mds,
            m => return Err(Error::Parse(format!("unknown mode {m}"))),
        };
        let (s, f, k) = (r.u32()?, r.u32()?, r.u32()?);
        let field = r.u8()?;
        let count = r.u32()? as usize;
        let mut symbols = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let len = r.u32()? as usize;
            symbols.push(r.take(len)?.to_vec());
        }
        if r.pos != bytes.len() {
            return Err(Error::Parse("trailing bytes after the last symbol".into()));
        }
        Ok(Self {
            mode,
            s,
            f,
            k,
            field,
            symbols,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Parse("truncated transcript".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("four bytes")))
    }
}
