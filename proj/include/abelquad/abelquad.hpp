#pragma once

#include "abelquad/core.hpp"
#include "abelquad/mesh.hpp"
#include "abelquad/metric.hpp"
#include "abelquad/homology.hpp"
#include "abelquad/hodge.hpp"
#include "abelquad/abel_jacobi.hpp"
#include "abelquad/quartic.hpp"
#include "abelquad/pipeline.hpp"
#include "abelquad/shapes.hpp"
