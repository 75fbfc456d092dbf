#pragma once

#include <hsbc/bem/gmres.hpp>
#include <hsbc/bem/mesh.hpp>
#include <hsbc/bem/output.hpp>
#include <hsbc/bem/panels.hpp>
#include <hsbc/bem/quadrature.hpp>
#include <hsbc/bem/solver.hpp>
