//! Little-endian binary encoding with a versioned header.

use super::SketchError;

pub(crate) const MAGIC: &[u8; 4] = b"SSKT";
pub(crate) const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub(crate) enum Kind {
    SparseRecovery = 1,
    L0 = 2,
    L1 = 3,
    CountMin = 4,
}

pub(crate) struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new(kind: Kind) -> Self {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.push(kind as u8);
        Self { buf }
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn i64(&mut self, v: i64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn i128(&mut self, v: i128) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn f64(&mut self, v: f64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

fn err(msg: impl Into<String>) -> SketchError {
    SketchError::Codec(msg.into())
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8], kind: Kind) -> Result<Self, SketchError> {
        if buf.len() < 7 || &buf[..4] != MAGIC {
            return Err(err("bad magic"));
        }
        let version = u16::from_le_bytes([buf[4], buf[5]]);
        if version != VERSION {
            return Err(err(format!("unsupported version {version}")));
        }
        if buf[6] != kind as u8 {
            return Err(err(format!("expected sketch kind {}, found {}", kind as u8, buf[6])));
        }
        Ok(Self { buf, at: 7 })
    }

    fn take<const N: usize>(&mut self) -> Result<[u8; N], SketchError> {
        let end = self.at + N;
        let bytes = self.buf.get(self.at..end).ok_or_else(|| err("truncated input"))?;
        self.at = end;
        Ok(bytes.try_into().expect("slice has length N"))
    }

    pub fn u64(&mut self) -> Result<u64, SketchError> {
        self.take::<8>().map(u64::from_le_bytes)
    }

    pub fn usize(&mut self) -> Result<usize, SketchError> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| err("length overflow"))
    }

    pub fn i64(&mut self) -> Result<i64, SketchError> {
        self.take::<8>().map(i64::from_le_bytes)
    }

    pub fn i128(&mut self) -> Result<i128, SketchError> {
        self.take::<16>().map(i128::from_le_bytes)
    }

    pub fn f64(&mut self) -> Result<f64, SketchError> {
        self.take::<8>().map(f64::from_le_bytes)
    }

    /// Guards allocations driven by untrusted lengths.
    pub fn expect_remaining(&self, bytes: usize) -> Result<(), SketchError> {
        if self.buf.len() - self.at < bytes {
            return Err(err("truncated input"));
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(), SketchError> {
        if self.at != self.buf.len() {
            return Err(err("trailing bytes"));
        }
        Ok(())
    }
}
