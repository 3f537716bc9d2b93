#pragma once

#include "scyc/numeric.hpp"
#include "scyc/index_set.hpp"
#include "scyc/net.hpp"
#include "scyc/power_word.hpp"
#include "scyc/markable.hpp"
#include "scyc/lp.hpp"
#include "scyc/cyclic.hpp"
#include "scyc/lambda.hpp"
#include "scyc/oracle.hpp"
#include "scyc/reductions.hpp"
#include "scyc/io.hpp"
