#pragma once

#include <bfree/bigfloat.hpp>
#include <bfree/continued_fraction.hpp>
#include <bfree/dimension.hpp>
#include <bfree/enclosure.hpp>
#include <bfree/errors.hpp>
#include <bfree/exact.hpp>
#include <bfree/free_set.hpp>
#include <bfree/hyperplane.hpp>
#include <bfree/liouville.hpp>
#include <bfree/parallel.hpp>
