#pragma once

#include "amoeba.hpp"
#include "directions.hpp"
#include "exact.hpp"
#include "fixtures.hpp"
#include "formula.hpp"
#include "lp.hpp"
#include "parser.hpp"
#include "polyhedron.hpp"
#include "polynomial.hpp"
#include "puiseux.hpp"
#include "random_term.hpp"
#include "rational.hpp"
#include "semantics.hpp"
#include "term.hpp"
#include "tropical.hpp"
#include "tropical_geometry.hpp"
#include "util.hpp"
