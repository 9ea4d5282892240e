#pragma once

#include <complex>
#include <gmpxx.h>
#include <iosfwd>
#include <string>

namespace curvegreen {

/// Exact element of Q(i): re + im*i with rational components.
/// All arithmetic is exact; conjugation is an involution.
struct GaussianRational {
    mpq_class re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long r) : re(r), im(0) {}
    GaussianRational(const mpq_class& r) : re(r), im(0) {}
    GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long rn, long rd, long in, long id) : re(rn, rd), im(in, id) {
        re.canonicalize();
        im.canonicalize();
    }

    static GaussianRational unit_i() { return GaussianRational(mpq_class(0), mpq_class(1)); }
    static GaussianRational frac(long n, long d) {
        mpq_class q(n, d);
        q.canonicalize();
        return GaussianRational(q);
    }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussianRational conj() const { return {re, mpq_class(-im)}; }

    GaussianRational operator-() const { return {mpq_class(-re), mpq_class(-im)}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        mpq_class r = re * o.re - im * o.im;
        mpq_class i = re * o.im + im * o.re;
        re = r;
        im = i;
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        mpq_class n = o.re * o.re + o.im * o.im; // nonzero unless o == 0
        mpq_class r = (re * o.re + im * o.im) / n;
        mpq_class i = (im * o.re - re * o.im) / n;
        re = r;
        im = i;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    /// i^k for k >= 0.
    static GaussianRational i_pow(int k) {
        switch (((k % 4) + 4) % 4) {
        case 0: return GaussianRational(1);
        case 1: return unit_i();
        case 2: return GaussianRational(-1);
        default: return -unit_i();
        }
    }

    std::string str() const {
        return re.get_str() + (sgn(im) >= 0 ? "+" : "") + im.get_str() + "i";
    }
};

using GR = GaussianRational;

} // namespace curvegreen
