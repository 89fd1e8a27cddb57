//! Areal structures: polygonal units with cached centroids and areas, their
//! adjacency, and the union study region.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{multipolygon_centroid, point_segment_distance, Point, Polygon, Rect, Region};

// Absolute contact tolerance, scaled by max(1, extent of the structure).
const CONTACT_TOL: f64 = 1e-9;

/// How units are judged to be neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjacencyRule {
    /// Boundaries share a segment of positive length (rook).
    #[default]
    #[serde(alias = "shared-edge")]
    Rook,
    /// Boundaries touch anywhere, including a single vertex (queen).
    #[serde(alias = "shared-vertex")]
    Queen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArealUnit {
    id: String,
    parts: Vec<Polygon>,
    centroid: Point,
    area: f64,
}

impl ArealUnit {
    pub fn new(id: impl Into<String>, parts: Vec<Polygon>) -> Result<Self> {
        let id = id.into();
        if parts.is_empty() {
            return Err(Error::Load {
                feature: id,
                reason: "empty geometry".into(),
            });
        }
        let area: f64 = parts.iter().map(Polygon::area).sum();
        let centroid = multipolygon_centroid(&parts).map_err(|e| Error::Load {
            feature: id.clone(),
            reason: e.to_string(),
        })?;
        Ok(ArealUnit {
            id,
            parts,
            centroid,
            area,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn parts(&self) -> &[Polygon] {
        &self.parts
    }

    pub fn centroid(&self) -> Point {
        self.centroid
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    fn bbox(&self) -> Rect {
        self.parts
            .iter()
            .map(Polygon::bbox)
            .reduce(|a, b| {
                Rect::new(
                    a.xmin.min(b.xmin),
                    a.ymin.min(b.ymin),
                    a.xmax.max(b.xmax),
                    a.ymax.max(b.ymax),
                )
            })
            .expect("unit has at least one part")
    }
}

/// An immutable collection of areal units.
///
/// Adjacency is stored by unit index; each neighbour list is sorted by
/// ascending unit id.
#[derive(Debug, Clone)]
pub struct ArealStructure {
    units: Vec<ArealUnit>,
    region: Region,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    rule: AdjacencyRule,
}

impl ArealStructure {
    pub fn new(units: Vec<ArealUnit>, rule: AdjacencyRule) -> Result<Self> {
        let adjacency = compute_adjacency(&units, rule);
        Self::with_adjacency(units, adjacency, rule)
    }

    fn with_adjacency(
        units: Vec<ArealUnit>,
        adjacency: Vec<Vec<usize>>,
        rule: AdjacencyRule,
    ) -> Result<Self> {
        if units.is_empty() {
            return Err(Error::InvalidGeometry("structure has no units".into()));
        }
        let mut index = HashMap::with_capacity(units.len());
        for (i, u) in units.iter().enumerate() {
            if index.insert(u.id.clone(), i).is_some() {
                return Err(Error::Load {
                    feature: u.id.clone(),
                    reason: "duplicate id".into(),
                });
            }
        }
        let region = Region::new(units.iter().flat_map(|u| u.parts.iter().cloned()).collect())?;
        Ok(ArealStructure {
            units,
            region,
            adjacency,
            index,
            rule,
        })
    }

    pub fn units(&self) -> &[ArealUnit] {
        &self.units
    }

    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn rule(&self) -> AdjacencyRule {
        self.rule
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Neighbour indices of unit `i`, in ascending id order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn neighbor_ids(&self, id: &str) -> Option<Vec<&str>> {
        let i = self.index_of(id)?;
        Some(self.adjacency[i].iter().map(|&j| self.units[j].id()).collect())
    }

    pub fn centroids(&self) -> Vec<Point> {
        self.units.iter().map(ArealUnit::centroid).collect()
    }

    pub fn centroids_of(&self, indices: &[usize]) -> Vec<Point> {
        indices.iter().map(|&i| self.units[i].centroid).collect()
    }

    /// Recompute adjacency under a different rule.
    pub fn with_rule(&self, rule: AdjacencyRule) -> Result<Self> {
        ArealStructure::new(self.units.clone(), rule)
    }

    /// Serialise as a GeoJSON FeatureCollection with an `id` property.
    pub fn to_geojson(&self) -> Value {
        let features: Vec<Value> = self
            .units
            .iter()
            .map(|u| {
                let rings = |p: &Polygon| -> Value {
                    std::iter::once(p.exterior())
                        .chain(p.holes().iter().map(Vec::as_slice))
                        .map(|r| {
                            let mut coords: Vec<Value> = r.iter().map(|q| json!([q.x, q.y])).collect();
                            coords.push(json!([r[0].x, r[0].y]));
                            Value::Array(coords)
                        })
                        .collect()
                };
                let geometry = if u.parts.len() == 1 {
                    json!({"type": "Polygon", "coordinates": rings(&u.parts[0])})
                } else {
                    json!({
                        "type": "MultiPolygon",
                        "coordinates": u.parts.iter().map(rings).collect::<Vec<_>>()
                    })
                };
                json!({"type": "Feature", "properties": {"id": u.id}, "geometry": geometry})
            })
            .collect();
        json!({"type": "FeatureCollection", "features": features})
    }
}

/// A `rows × cols` grid of square cells tiling
/// `[0, cols·cell_size] × [0, rows·cell_size]`, with rook adjacency and ids
/// `r{row}c{col}`.
pub fn build_grid(rows: usize, cols: usize, cell_size: f64) -> Result<ArealStructure> {
    if rows == 0 || cols == 0 || !(cell_size > 0.0) || !cell_size.is_finite() {
        return Err(Error::Domain(format!(
            "grid needs rows, cols >= 1 and cell_size > 0 (got {rows}, {cols}, {cell_size})"
        )));
    }
    let id = |r: usize, c: usize| format!("r{r}c{c}");
    let mut units = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let (x0, y0) = (c as f64 * cell_size, r as f64 * cell_size);
            let cell = Polygon::from_rect(&Rect::new(x0, y0, x0 + cell_size, y0 + cell_size))?;
            units.push(ArealUnit::new(id(r, c), vec![cell])?);
        }
    }
    // Rook neighbours are known without geometry tests.
    let adjacency = (0..rows * cols)
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            let mut nb = Vec::with_capacity(4);
            if r > 0 {
                nb.push(i - cols);
            }
            if r + 1 < rows {
                nb.push(i + cols);
            }
            if c > 0 {
                nb.push(i - 1);
            }
            if c + 1 < cols {
                nb.push(i + 1);
            }
            nb.sort_by(|&a, &b| units[a].id.cmp(&units[b].id));
            nb
        })
        .collect();
    ArealStructure::with_adjacency(units, adjacency, AdjacencyRule::Rook)
}

/// Symmetric, irreflexive adjacency lists (sorted by unit id).
pub fn compute_adjacency(units: &[ArealUnit], rule: AdjacencyRule) -> Vec<Vec<usize>> {
    let boxes: Vec<Rect> = units.iter().map(ArealUnit::bbox).collect();
    let extent = boxes
        .iter()
        .map(|b| b.width().max(b.height()))
        .fold(1.0, f64::max);
    let tol = CONTACT_TOL * extent;
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); units.len()];
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            let (a, b) = (&boxes[i], &boxes[j]);
            if a.xmax + tol < b.xmin
                || b.xmax + tol < a.xmin
                || a.ymax + tol < b.ymin
                || b.ymax + tol < a.ymin
            {
                continue;
            }
            let touching = match rule {
                AdjacencyRule::Rook => shared_boundary_length(&units[i], &units[j], tol) > tol,
                AdjacencyRule::Queen => boundaries_touch(&units[i], &units[j], tol),
            };
            if touching {
                sets[i].insert(j);
                sets[j].insert(i);
            }
        }
    }
    sets.into_iter()
        .map(|s| {
            let mut v: Vec<usize> = s.into_iter().collect();
            v.sort_by(|&a, &b| units[a].id.cmp(&units[b].id));
            v
        })
        .collect()
}

fn unit_segments(u: &ArealUnit) -> Vec<(Point, Point)> {
    u.parts.iter().flat_map(Polygon::segments).collect()
}

fn shared_boundary_length(a: &ArealUnit, b: &ArealUnit, tol: f64) -> f64 {
    let sb = unit_segments(b);
    let mut total = 0.0;
    for (p, q) in unit_segments(a) {
        let len = p.distance(&q);
        if len == 0.0 {
            continue;
        }
        let (ux, uy) = ((q.x - p.x) / len, (q.y - p.y) / len);
        for (r, s) in &sb {
            // both endpoints of the other segment must lie on this line
            let off = |z: &Point| ((z.x - p.x) * uy - (z.y - p.y) * ux).abs();
            if off(r) > tol || off(s) > tol {
                continue;
            }
            let proj = |z: &Point| (z.x - p.x) * ux + (z.y - p.y) * uy;
            let (lo, hi) = {
                let (t0, t1) = (proj(r), proj(s));
                (t0.min(t1), t0.max(t1))
            };
            total += (hi.min(len) - lo.max(0.0)).max(0.0);
        }
    }
    total
}

fn boundaries_touch(a: &ArealUnit, b: &ArealUnit, tol: f64) -> bool {
    let (sa, sb) = (unit_segments(a), unit_segments(b));
    let vertex_on = |segs: &[(Point, Point)], others: &[(Point, Point)]| {
        segs.iter()
            .any(|(v, _)| others.iter().any(|(r, s)| point_segment_distance(v, r, s) <= tol))
    };
    vertex_on(&sa, &sb) || vertex_on(&sb, &sa)
}

/// Read a GeoJSON FeatureCollection from disk.
pub fn load_structure_file(path: impl AsRef<Path>, rule: AdjacencyRule) -> Result<ArealStructure> {
    let text = std::fs::read_to_string(path.as_ref())?;
    load_structure(&text, rule)
}

/// Parse a GeoJSON FeatureCollection of planar Polygon/MultiPolygon features,
/// each with a string `id` property.
pub fn load_structure(document: &str, rule: AdjacencyRule) -> Result<ArealStructure> {
    let doc: Value = serde_json::from_str(document)?;
    let load_err = |feature: &str, reason: &str| Error::Load {
        feature: feature.to_string(),
        reason: reason.to_string(),
    };
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(load_err("<document>", "not a GeoJSON FeatureCollection"));
    }
    if let Some(crs) = doc.get("crs") {
        let name = crs.to_string().to_ascii_uppercase();
        if ["4326", "CRS84", "4269", "4617"]
            .iter()
            .any(|tag| name.contains(tag))
        {
            return Err(load_err(
                "<document>",
                "declares a geographic (longitude/latitude) CRS; project the data to planar coordinates first",
            ));
        }
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| load_err("<document>", "missing `features` array"))?;

    let mut units = Vec::with_capacity(features.len());
    for (k, f) in features.iter().enumerate() {
        let id = match f.pointer("/properties/id") {
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(_) => {
                return Err(load_err(
                    &format!("#{k}"),
                    "`id` property must be a nonempty string",
                ))
            }
            None => return Err(load_err(&format!("#{k}"), "missing `id` property")),
        };
        let geometry = f
            .get("geometry")
            .filter(|g| !g.is_null())
            .ok_or_else(|| load_err(&id, "empty geometry"))?;
        let parts = parse_geometry(geometry).map_err(|reason| load_err(&id, &reason))?;
        if parts.is_empty() {
            return Err(load_err(&id, "empty geometry"));
        }
        units.push(ArealUnit::new(id, parts)?);
    }
    ArealStructure::new(units, rule)
}

fn parse_geometry(g: &Value) -> std::result::Result<Vec<Polygon>, String> {
    let kind = g.get("type").and_then(Value::as_str).unwrap_or("");
    let coords = g.get("coordinates").ok_or("geometry has no coordinates")?;
    match kind {
        "Polygon" => Ok(vec![parse_polygon(coords)?]),
        "MultiPolygon" => coords
            .as_array()
            .ok_or("MultiPolygon coordinates must be an array")?
            .iter()
            .map(parse_polygon)
            .collect(),
        other => Err(format!("unsupported geometry type `{other}`")),
    }
}

fn parse_polygon(v: &Value) -> std::result::Result<Polygon, String> {
    let rings = v
        .as_array()
        .ok_or("polygon coordinates must be an array of rings")?;
    let mut rings = rings.iter().map(parse_ring);
    let exterior = rings.next().ok_or("polygon has no rings")??;
    let holes = rings.collect::<std::result::Result<Vec<_>, _>>()?;
    Polygon::new(exterior, holes).map_err(|e| e.to_string())
}

fn parse_ring(v: &Value) -> std::result::Result<Vec<Point>, String> {
    v.as_array()
        .ok_or("ring must be an array of positions")?
        .iter()
        .map(|pos| match pos.as_array().map(Vec::as_slice) {
            Some([x, y, ..]) => match (x.as_f64(), y.as_f64()) {
                (Some(x), Some(y)) => Ok(Point::new(x, y)),
                _ => Err("position coordinates must be numbers".to_string()),
            },
            _ => Err("position must have at least two coordinates".to_string()),
        })
        .collect()
}
