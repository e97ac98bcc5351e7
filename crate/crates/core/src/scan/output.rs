//! CSV and JSON writers. Both are byte-deterministic: floats use the
//! shortest round-trip representation and rows follow grid order.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::squeeze::EvalPath;

use super::contour::Polyline;
use super::figures::{FigureData, Profile};
use super::grid::{Axis, AxisName, Family, FixedParams, GridSpec};
use super::region::{Mask, RegionMap};

/// Bumped whenever a column or JSON field changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "NaN".to_string()
    }
}

fn header(axes: &[&Axis]) -> Vec<String> {
    let mut h: Vec<String> = axes.iter().map(|a| a.name.as_str().to_string()).collect();
    h.extend(["f_x", "f_y", "mask_x", "mask_y", "error_code"].map(String::from));
    if axes.iter().any(|a| a.name == AxisName::Phi) {
        h.push("phi_over_pi".into());
    }
    h
}

fn row(coords: &[(AxisName, f64)], fx: f64, fy: f64, mx: Mask, my: Mask, code: u8) -> Vec<String> {
    let mut r: Vec<String> = coords.iter().map(|c| num(c.1)).collect();
    r.extend([num(fx), num(fy), mx.as_str().into(), my.as_str().into(), code.to_string()]);
    if let Some(phi) = coords.iter().find(|c| c.0 == AxisName::Phi) {
        r.push(num(phi.1 / std::f64::consts::PI));
    }
    r
}

pub fn write_region_csv<W: Write>(map: &RegionMap, out: W) -> Result<()> {
    let (a1, a2) = (&map.grid.axis1, &map.grid.axis2);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&[a1, a2]))?;
    for i in 0..a1.steps {
        for j in 0..a2.steps {
            let p = map.index(i, j);
            w.write_record(row(
                &[(a1.name, a1.value(i)), (a2.name, a2.value(j))],
                map.fx[p],
                map.fy[p],
                map.mask_x[p],
                map.mask_y[p],
                map.error_code[p],
            ))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile_csv<W: Write>(profile: &Profile, out: W) -> Result<()> {
    let a = &profile.axis;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(&[a]))?;
    for i in 0..a.steps {
        w.write_record(row(
            &[(a.name, a.value(i))],
            profile.fx[i],
            profile.fy[i],
            profile.mask_x[i],
            profile.mask_y[i],
            profile.error_code[i],
        ))?;
    }
    w.flush()?;
    Ok(())
}

fn rows<T: Copy>(flat: &[T], width: usize) -> Vec<Vec<T>> {
    flat.chunks(width).map(|c| c.to_vec()).collect()
}

/// `NaN` becomes `null`.
fn opt(flat: &[f64]) -> Vec<Option<f64>> {
    flat.iter().map(|&x| x.is_finite().then_some(x)).collect()
}

#[derive(Serialize)]
struct RegionDocument<'a> {
    schema_version: u32,
    tool_version: &'static str,
    kind: &'static str,
    path: EvalPath,
    grid: &'a GridSpec,
    fx: Vec<Vec<Option<f64>>>,
    fy: Vec<Vec<Option<f64>>>,
    mask_x: Vec<Vec<Mask>>,
    mask_y: Vec<Vec<Mask>>,
    error_code: Vec<Vec<u8>>,
    contours_x: &'a [Polyline],
    contours_y: &'a [Polyline],
}

#[derive(Serialize)]
struct ProfileDocument<'a> {
    schema_version: u32,
    tool_version: &'static str,
    kind: &'static str,
    path: EvalPath,
    family: Family,
    axis: &'a Axis,
    fixed: &'a FixedParams,
    fx: Vec<Option<f64>>,
    fy: Vec<Option<f64>>,
    mask_x: &'a [Mask],
    mask_y: &'a [Mask],
    error_code: &'a [u8],
}

pub fn region_json(map: &RegionMap) -> Result<String> {
    let width = map.grid.axis2.steps;
    let doc = RegionDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        kind: "region",
        path: map.path,
        grid: &map.grid,
        fx: rows(&opt(&map.fx), width),
        fy: rows(&opt(&map.fy), width),
        mask_x: rows(&map.mask_x, width),
        mask_y: rows(&map.mask_y, width),
        error_code: rows(&map.error_code, width),
        contours_x: &map.contours_x,
        contours_y: &map.contours_y,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn profile_json(profile: &Profile) -> Result<String> {
    let doc = ProfileDocument {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        kind: "profile",
        path: profile.path,
        family: profile.family,
        axis: &profile.axis,
        fixed: &profile.fixed,
        fx: opt(&profile.fx),
        fy: opt(&profile.fy),
        mask_x: &profile.mask_x,
        mask_y: &profile.mask_y,
        error_code: &profile.error_code,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

impl FigureData {
    pub fn write<W: Write>(&self, format: OutputFormat, mut out: W) -> Result<()> {
        match (self, format) {
            (FigureData::Region(m), OutputFormat::Csv) => write_region_csv(m, out),
            (FigureData::Profile(p), OutputFormat::Csv) => write_profile_csv(p, out),
            (FigureData::Region(m), OutputFormat::Json) => {
                writeln!(out, "{}", region_json(m)?)?;
                Ok(())
            }
            (FigureData::Profile(p), OutputFormat::Json) => {
                writeln!(out, "{}", profile_json(p)?)?;
                Ok(())
            }
        }
    }

    pub fn to_bytes(&self, format: OutputFormat) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }
}
