#ifndef TGE_TGE_HPP
#define TGE_TGE_HPP

#include "tge/bimodule.hpp"
#include "tge/entropy.hpp"
#include "tge/errors.hpp"
#include "tge/expression.hpp"
#include "tge/graph.hpp"
#include "tge/graph_io.hpp"
#include "tge/laurent.hpp"
#include "tge/matrix.hpp"
#include "tge/numeric.hpp"
#include "tge/parallel.hpp"
#include "tge/paths.hpp"
#include "tge/report.hpp"
#include "tge/rewriter.hpp"

#endif  // TGE_TGE_HPP
