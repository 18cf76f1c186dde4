#pragma once

// Umbrella header.

#include "rsconv/archimedean.hpp"
#include "rsconv/arith.hpp"
#include "rsconv/asymptotics.hpp"
#include "rsconv/dirichlet.hpp"
#include "rsconv/errors.hpp"
#include "rsconv/ingest.hpp"
#include "rsconv/local_factors.hpp"
#include "rsconv/model.hpp"
#include "rsconv/perron.hpp"
#include "rsconv/poly.hpp"
#include "rsconv/quadrature.hpp"
#include "rsconv/satake.hpp"
#include "rsconv/special.hpp"
