#pragma once

#include "cyclo.hpp"
#include "fp_poly.hpp"
#include "liedata.hpp"
#include "linkdiag.hpp"
#include "number_theory.hpp"
#include "qpoly.hpp"
#include "serialize.hpp"
#include "tau.hpp"
