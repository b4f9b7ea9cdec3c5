#pragma once

#include <pwsym/error.hpp>
#include <pwsym/geometry.hpp>
#include <pwsym/groupcase.hpp>
#include <pwsym/holo.hpp>
#include <pwsym/io.hpp>
#include <pwsym/laplacian.hpp>
#include <pwsym/quadrature.hpp>
#include <pwsym/radial_function.hpp>
#include <pwsym/special.hpp>
#include <pwsym/transform.hpp>
