//! JSON file formats.
//!
//! Tensor: `{"n": 3, "order": 1, "scalar": "int", "data": [1, 2, 3]}` with
//! row-major data. Layer: `{"m": 1, "mprime": 1, "n": 3, "scalar": "int",
//! "coeffs": {"0 0": 1, "0 1": 1}}`. Rationals are written as `"p/q"`
//! strings; `gf2` entries as `0`/`1`.

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::layer::EquivariantLayer;
use crate::partition::SetPartition;
use crate::scalar::{Gf2, Scalar, ScalarKind};
use crate::tensor::DenseTensor;

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(format!("missing field {key:?}")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(format!("field {key:?} must be a non-negative integer")))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse("expected a JSON object"))
}

fn scalar_kind(obj: &Map<String, Value>) -> Result<ScalarKind> {
    field(obj, "scalar")?
        .as_str()
        .ok_or_else(|| Error::parse("field \"scalar\" must be a string"))?
        .parse()
}

pub fn tensor_to_json<S: Scalar>(t: &DenseTensor<S>) -> Value {
    json!({
        "n": t.n(),
        "order": t.order(),
        "scalar": S::KIND.as_str(),
        "data": t.data().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

pub fn tensor_from_json<S: Scalar>(v: &Value) -> Result<DenseTensor<S>> {
    let obj = as_object(v)?;
    let kind = scalar_kind(obj)?;
    if kind != S::KIND {
        return Err(Error::parse(format!("expected scalar type {}, file has {kind}", S::KIND)));
    }
    let n = usize_field(obj, "n")?;
    let order = usize_field(obj, "order")?;
    let data = field(obj, "data")?
        .as_array()
        .ok_or_else(|| Error::parse("field \"data\" must be an array"))?
        .iter()
        .map(S::from_json)
        .collect::<Result<Vec<_>>>()?;
    DenseTensor::from_data(n, order, data).map_err(|e| match e {
        Error::Domain(msg) => Error::parse(msg),
        other => other,
    })
}

pub fn layer_to_json<S: Scalar>(layer: &EquivariantLayer<S>) -> Value {
    let coeffs: Map<String, Value> = layer
        .coeffs()
        .map(|(p, c)| (p.to_string(), c.to_json()))
        .collect();
    json!({
        "m": layer.m(),
        "mprime": layer.mprime(),
        "n": layer.n(),
        "scalar": S::KIND.as_str(),
        "coeffs": coeffs,
    })
}

pub fn layer_from_json<S: Scalar>(v: &Value) -> Result<EquivariantLayer<S>> {
    let obj = as_object(v)?;
    let kind = scalar_kind(obj)?;
    if kind != S::KIND {
        return Err(Error::parse(format!("expected scalar type {}, file has {kind}", S::KIND)));
    }
    let m = usize_field(obj, "m")?;
    let mprime = usize_field(obj, "mprime")?;
    let n = usize_field(obj, "n")?;
    let coeffs = field(obj, "coeffs")?
        .as_object()
        .ok_or_else(|| Error::parse("field \"coeffs\" must be an object"))?
        .iter()
        .map(|(key, value)| Ok((key.parse::<SetPartition>()?, S::from_json(value)?)))
        .collect::<Result<Vec<_>>>()?;
    EquivariantLayer::new(m, mprime, n, coeffs).map_err(|e| match e {
        Error::Domain(msg) => Error::parse(msg),
        Error::BasisIndex { partition, blocks, n } => {
            Error::parse(format!("coefficient key {partition:?} has {blocks} blocks but n = {n}"))
        }
        other => other,
    })
}

/// A tensor of whichever scalar type a file declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Int(DenseTensor<i64>),
    Rational(DenseTensor<BigRational>),
    Gf2(DenseTensor<Gf2>),
    F64(DenseTensor<f64>),
}

impl AnyTensor {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match scalar_kind(as_object(v)?)? {
            ScalarKind::Int => AnyTensor::Int(tensor_from_json(v)?),
            ScalarKind::Rational => AnyTensor::Rational(tensor_from_json(v)?),
            ScalarKind::Gf2 => AnyTensor::Gf2(tensor_from_json(v)?),
            ScalarKind::F64 => AnyTensor::F64(tensor_from_json(v)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyTensor::Int(t) => tensor_to_json(t),
            AnyTensor::Rational(t) => tensor_to_json(t),
            AnyTensor::Gf2(t) => tensor_to_json(t),
            AnyTensor::F64(t) => tensor_to_json(t),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyTensor::Int(_) => ScalarKind::Int,
            AnyTensor::Rational(_) => ScalarKind::Rational,
            AnyTensor::Gf2(_) => ScalarKind::Gf2,
            AnyTensor::F64(_) => ScalarKind::F64,
        }
    }
}

/// A layer of whichever scalar type a file declares.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyLayer {
    Int(EquivariantLayer<i64>),
    Rational(EquivariantLayer<BigRational>),
    Gf2(EquivariantLayer<Gf2>),
    F64(EquivariantLayer<f64>),
}

impl AnyLayer {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match scalar_kind(as_object(v)?)? {
            ScalarKind::Int => AnyLayer::Int(layer_from_json(v)?),
            ScalarKind::Rational => AnyLayer::Rational(layer_from_json(v)?),
            ScalarKind::Gf2 => AnyLayer::Gf2(layer_from_json(v)?),
            ScalarKind::F64 => AnyLayer::F64(layer_from_json(v)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyLayer::Int(l) => layer_to_json(l),
            AnyLayer::Rational(l) => layer_to_json(l),
            AnyLayer::Gf2(l) => layer_to_json(l),
            AnyLayer::F64(l) => layer_to_json(l),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyLayer::Int(_) => ScalarKind::Int,
            AnyLayer::Rational(_) => ScalarKind::Rational,
            AnyLayer::Gf2(_) => ScalarKind::Gf2,
            AnyLayer::F64(_) => ScalarKind::F64,
        }
    }
}
