#pragma once

#include "eqfrob/errors.hpp"
#include "eqfrob/scalars/rational.hpp"
#include "eqfrob/scalars/ground_poly.hpp"
#include "eqfrob/scalars/rational_fn.hpp"
#include "eqfrob/scalars/matrix.hpp"
#include "eqfrob/scalars/fraction_free.hpp"
#include "eqfrob/graded/basis.hpp"
#include "eqfrob/graded/element.hpp"
#include "eqfrob/graded/mult_table.hpp"
#include "eqfrob/graded/super_series.hpp"
#include "eqfrob/dgbv/linear_operator.hpp"
#include "eqfrob/dgbv/report.hpp"
#include "eqfrob/dgbv/algebra.hpp"
#include "eqfrob/hodge.hpp"
#include "eqfrob/cartan.hpp"
#include "eqfrob/mc.hpp"
#include "eqfrob/frobenius.hpp"
#include "eqfrob/models.hpp"
#include "eqfrob/serialize.hpp"
#include "eqfrob/pipeline.hpp"
