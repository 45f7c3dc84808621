//! JSON emission with fixed float formatting: every f64 is written in
//! scientific notation with 17 significant digits, so output is
//! byte-identical across runs and round-trips exactly.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

fn write_float<W: io::Write + ?Sized>(writer: &mut W, value: f64) -> io::Result<()> {
    debug_assert!(value.is_finite(), "non-finite float in JSON output");
    write!(writer, "{value:.16e}")
}

/// Compact output with fixed-precision floats.
struct CompactFloats;

impl Formatter for CompactFloats {
    fn write_f64<W: io::Write + ?Sized>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_float(writer, value)
    }
}

/// Pretty output with fixed-precision floats; indentation is delegated to
/// the stock pretty formatter.
struct PrettyFloats<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for PrettyFloats<'_> {
    fn write_f64<W: io::Write + ?Sized>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_float(writer, value)
    }

    fn begin_array<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: io::Write + ?Sized>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: io::Write + ?Sized>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: io::Write + ?Sized>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes a value to a JSON string with deterministic float formatting.
pub fn to_json_string<T: Serialize>(value: &T, indent: bool) -> String {
    let mut out = Vec::new();
    if indent {
        let fmt = PrettyFloats {
            inner: PrettyFormatter::new(),
        };
        let mut ser = Serializer::with_formatter(&mut out, fmt);
        value
            .serialize(&mut ser)
            .expect("JSON serialization cannot fail");
    } else {
        let mut ser = Serializer::with_formatter(&mut out, CompactFloats);
        value
            .serialize(&mut ser)
            .expect("JSON serialization cannot fail");
    }
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
