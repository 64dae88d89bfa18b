#pragma once

#include "hyperflow/error.hpp"
#include "hyperflow/geometry.hpp"
#include "hyperflow/isometry.hpp"
#include "hyperflow/curve.hpp"
#include "hyperflow/horograph.hpp"
#include "hyperflow/shapes.hpp"
#include "hyperflow/reflection.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/verify.hpp"
#include "hyperflow/io.hpp"
#include "hyperflow/config.hpp"
#include "hyperflow/pipeline.hpp"
