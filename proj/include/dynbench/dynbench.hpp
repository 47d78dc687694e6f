#pragma once

// Umbrella header.

#include "dynbench/benchmark.hpp"
#include "dynbench/bootstrap.hpp"
#include "dynbench/csv.hpp"
#include "dynbench/exposure.hpp"
#include "dynbench/geo.hpp"
#include "dynbench/geojson.hpp"
#include "dynbench/ingest.hpp"
#include "dynbench/records.hpp"
#include "dynbench/report.hpp"
#include "dynbench/rng.hpp"
#include "dynbench/severity.hpp"
#include "dynbench/synth.hpp"
#include "dynbench/time.hpp"
