use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// 17 significant digits, so values round-trip exactly.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV sink on a file or stdout.
pub struct Sink {
    inner: csv::Writer<Box<dyn Write>>,
}

fn writer(w: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new().flexible(true).from_writer(w)
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Sink> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { inner: writer(w) })
    }

    pub fn row<I, S>(&mut self, fields: I) -> csv::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)
    }

    /// Ends one CSV block; the next row starts a new header.
    pub fn blank(self) -> csv::Result<Sink> {
        let mut w = self.inner.into_inner().map_err(|e| e.into_error())?;
        w.write_all(b"\n")?;
        Ok(Sink { inner: writer(w) })
    }

    pub fn finish(mut self) -> csv::Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}
