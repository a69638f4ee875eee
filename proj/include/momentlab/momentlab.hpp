#pragma once

// Everything except the command-line layer.

#include "momentlab/closure.hpp"
#include "momentlab/diffeq.hpp"
#include "momentlab/families.hpp"
#include "momentlab/hankel.hpp"
#include "momentlab/linalg.hpp"
#include "momentlab/measures.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/polynomial.hpp"
#include "momentlab/quadrature.hpp"
#include "momentlab/real.hpp"
#include "momentlab/scalar.hpp"
#include "momentlab/scalar_json.hpp"
#include "momentlab/sturm.hpp"
