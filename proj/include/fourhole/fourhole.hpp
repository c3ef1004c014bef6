#pragma once

#include "fourhole/algebra.hpp"
#include "fourhole/bq.hpp"
#include "fourhole/dynamics.hpp"
#include "fourhole/error.hpp"
#include "fourhole/realcase.hpp"
#include "fourhole/render.hpp"
#include "fourhole/slope.hpp"
#include "fourhole/tree.hpp"
#include "fourhole/types.hpp"
