#ifndef LATENTDIR_LATENTDIR_HPP
#define LATENTDIR_LATENTDIR_HPP

#include "latentdir/error.hpp"
#include "latentdir/format.hpp"
#include "latentdir/types.hpp"
#include "latentdir/linalg.hpp"
#include "latentdir/dataset.hpp"
#include "latentdir/estimators.hpp"
#include "latentdir/semantics.hpp"
#include "latentdir/synthetic.hpp"
#include "latentdir/evaluation.hpp"
#include "latentdir/artifact.hpp"

#endif
