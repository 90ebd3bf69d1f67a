#pragma once

#include "tenselab/syntax.hpp"
#include "tenselab/lattice.hpp"
#include "tenselab/algebra.hpp"
#include "tenselab/frames.hpp"
#include "tenselab/duality.hpp"
#include "tenselab/fuzzy.hpp"
#include "tenselab/proofs.hpp"
#include "tenselab/fixtures.hpp"
#include "tenselab/search.hpp"
#include "tenselab/io.hpp"
