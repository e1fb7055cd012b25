#pragma once

#include <ciso/checker.hpp>
#include <ciso/colouring.hpp>
#include <ciso/correspondence.hpp>
#include <ciso/error.hpp>
#include <ciso/field_poly.hpp>
#include <ciso/graph.hpp>
#include <ciso/lowerbound.hpp>
#include <ciso/rng.hpp>
#include <ciso/trees.hpp>
#include <ciso/vizing.hpp>
#include <ciso/witness_search.hpp>
